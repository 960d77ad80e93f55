//! Compensated (Neumaier) summation.

use num_complex::Complex;

use crate::scalar::Real;

#[derive(Debug, Clone, Copy, Default)]
pub struct NeumaierSum<T> {
    sum: T,
    compensation: T,
}

impl<T: Real> NeumaierSum<T> {
    pub fn new() -> Self {
        Self {
            sum: T::zero(),
            compensation: T::zero(),
        }
    }

    pub fn add(&mut self, x: T) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> T {
        self.sum + self.compensation
    }
}

impl<T: Real> FromIterator<T> for NeumaierSum<T> {
    fn from_iter<I: IntoIterator<Item = T>>(iter: I) -> Self {
        let mut s = Self::new();
        iter.into_iter().for_each(|x| s.add(x));
        s
    }
}

/// Component-wise compensated sum of complex values.
#[derive(Debug, Clone, Copy, Default)]
pub struct ComplexSum<T> {
    re: NeumaierSum<T>,
    im: NeumaierSum<T>,
}

impl<T: Real> ComplexSum<T> {
    pub fn new() -> Self {
        Self {
            re: NeumaierSum::new(),
            im: NeumaierSum::new(),
        }
    }

    pub fn add(&mut self, z: Complex<T>) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    pub fn value(&self) -> Complex<T> {
        Complex::new(self.re.value(), self.im.value())
    }
}

impl<T: Real> FromIterator<Complex<T>> for ComplexSum<T> {
    fn from_iter<I: IntoIterator<Item = Complex<T>>>(iter: I) -> Self {
        let mut s = Self::new();
        iter.into_iter().for_each(|z| s.add(z));
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_cancelled_terms() {
        let xs = [1.0f64, 1e100, 1.0, -1e100];
        assert_eq!(xs.iter().copied().collect::<NeumaierSum<_>>().value(), 2.0);
        assert_eq!(xs.iter().sum::<f64>(), 0.0);
    }

    #[test]
    fn order_independent_to_rounding() {
        let xs: Vec<f64> = (1..=10_000)
            .map(|i| 1.0 / i as f64 * if i % 3 == 0 { -1.0 } else { 1.0 })
            .collect();
        let fwd = xs.iter().copied().collect::<NeumaierSum<_>>().value();
        let rev = xs.iter().rev().copied().collect::<NeumaierSum<_>>().value();
        assert!((fwd - rev).abs() <= 1e-15 * fwd.abs());
    }
}
