//! TOML scenario files.
//!
//! Every key is optional and falls back to the reference deployment. Angles
//! are radians unless the key carries a `_deg` suffix; array pitches may be
//! given in meters or, with `_wavelengths`, as a multiple of the wavelength.
//!
//! ```toml
//! P = 6
//! Q = 8
//! K = 1.0
//!
//! [uav]
//! azimuth_tilt_deg = 60
//!
//! [ris]
//! M_x = 60
//! d_M_wavelengths = 0.25
//! center = [50.0, 30.0, 20.0]
//! phase_policy = "random"
//! ```

use std::path::Path;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::geometry::Vec3;
use crate::scenario::{PhasePolicy, Scenario, SubArrayWeighting};

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioFile {
    wavelength: Option<f64>,
    #[serde(rename = "K")]
    k: Option<f64>,
    #[serde(rename = "P")]
    p: Option<i64>,
    #[serde(rename = "Q")]
    q: Option<i64>,
    #[serde(rename = "H_0")]
    h0: Option<f64>,
    #[serde(rename = "D_0")]
    d0: Option<f64>,
    t: Option<f64>,
    snr_db: Option<f64>,
    seed: Option<u64>,
    max_subarray_side: Option<i64>,
    #[serde(default)]
    uav: TerminalFile,
    #[serde(default)]
    vehicle: TerminalFile,
    #[serde(default)]
    ris: RisFile,
    #[serde(default)]
    clusters: ClustersFile,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct TerminalFile {
    spacing: Option<f64>,
    spacing_wavelengths: Option<f64>,
    azimuth_tilt: Option<f64>,
    azimuth_tilt_deg: Option<f64>,
    vertical_tilt: Option<f64>,
    vertical_tilt_deg: Option<f64>,
    speed: Option<f64>,
    azimuth_heading: Option<f64>,
    azimuth_heading_deg: Option<f64>,
    vertical_heading: Option<f64>,
    vertical_heading_deg: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RisFile {
    #[serde(rename = "M_x")]
    mx: Option<i64>,
    #[serde(rename = "M_z")]
    mz: Option<i64>,
    #[serde(rename = "d_M")]
    spacing: Option<f64>,
    #[serde(rename = "d_M_wavelengths")]
    spacing_wavelengths: Option<f64>,
    center: Option<[f64; 3]>,
    normal_azimuth: Option<f64>,
    normal_azimuth_deg: Option<f64>,
    amplitude: Option<f64>,
    phase_policy: Option<PolicyName>,
    weighting: Option<WeightingName>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ClustersFile {
    #[serde(rename = "N")]
    count: Option<i64>,
    #[serde(rename = "n_L")]
    rays: Option<i64>,
    box_min: Option<[f64; 3]>,
    box_max: Option<[f64; 3]>,
    ray_spread: Option<f64>,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(rename_all = "lowercase")]
enum PolicyName {
    Zero,
    Random,
    Cophase,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(rename_all = "lowercase")]
enum WeightingName {
    Count,
    Unit,
}

/// Reads and validates a scenario file.
pub fn load_scenario(path: impl AsRef<Path>) -> Result<Scenario<f64>> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_scenario(&text)
}

/// Parses scenario text; errors carry the offending key and its line.
pub fn parse_scenario(text: &str) -> Result<Scenario<f64>> {
    let file: ScenarioFile = toml::from_str(text).map_err(|e| {
        let line = e.span().map(|s| line_of(text, s.start));
        Error::Config {
            key: quoted_key(e.message()),
            line,
            message: e.message().trim().to_owned(),
        }
    })?;
    build(file).and_then(|s| s.validate().map(|()| s)).map_err(|e| match e {
        Error::Config {
            key: Some(key),
            line: None,
            message,
        } => {
            let line = locate(text, &key);
            Error::Config {
                key: Some(key),
                line,
                message,
            }
        }
        other => other,
    })
}

fn build(f: ScenarioFile) -> Result<Scenario<f64>> {
    let mut s = Scenario::<f64>::default();
    if let Some(v) = f.wavelength {
        s.wavelength = v;
        // pitches that were defaulted follow the wavelength
        s.uav.array.spacing = v / 2.0;
        s.vehicle.array.spacing = v / 2.0;
        s.ris.element_spacing = v / 2.0;
    }
    let lambda = s.wavelength;
    set(&mut s.rician_k, f.k);
    set_count(&mut s.uav.array.count, f.p, "P")?;
    set_count(&mut s.vehicle.array.count, f.q, "Q")?;
    set(&mut s.uav_height, f.h0);
    set(&mut s.ground_distance, f.d0);
    set(&mut s.time, f.t);
    set(&mut s.snr_db, f.snr_db);
    set(&mut s.seed, f.seed);
    if let Some(side) = f.max_subarray_side {
        s.max_side_override = Some(count(side, "max_subarray_side")?);
    }

    for (name, file, terminal) in [("uav", &f.uav, &mut s.uav), ("vehicle", &f.vehicle, &mut s.vehicle)] {
        let key = |leaf: &str| format!("{name}.{leaf}");
        set(
            &mut terminal.array.spacing,
            scaled(file.spacing, file.spacing_wavelengths, lambda, &key("spacing"))?,
        );
        set(
            &mut terminal.array.azimuth_tilt,
            angle(file.azimuth_tilt, file.azimuth_tilt_deg, &key("azimuth_tilt"))?,
        );
        set(
            &mut terminal.array.vertical_tilt,
            angle(file.vertical_tilt, file.vertical_tilt_deg, &key("vertical_tilt"))?,
        );
        set(&mut terminal.motion.speed, file.speed);
        set(
            &mut terminal.motion.azimuth_heading,
            angle(file.azimuth_heading, file.azimuth_heading_deg, &key("azimuth_heading"))?,
        );
        set(
            &mut terminal.motion.vertical_heading,
            angle(
                file.vertical_heading,
                file.vertical_heading_deg,
                &key("vertical_heading"),
            )?,
        );
    }

    let r = &f.ris;
    set_count(&mut s.ris.elements_x, r.mx, "ris.M_x")?;
    set_count(&mut s.ris.elements_z, r.mz, "ris.M_z")?;
    set(
        &mut s.ris.element_spacing,
        scaled(r.spacing, r.spacing_wavelengths, lambda, "ris.d_M")?,
    );
    set(&mut s.ris.center, r.center.map(vec3));
    set(
        &mut s.ris.normal_azimuth,
        angle(r.normal_azimuth, r.normal_azimuth_deg, "ris.normal_azimuth")?,
    );
    set(&mut s.ris_control.amplitude, r.amplitude);
    set(
        &mut s.ris_control.phase_policy,
        r.phase_policy.map(|p| match p {
            PolicyName::Zero => PhasePolicy::Zero,
            PolicyName::Random => PhasePolicy::Random,
            PolicyName::Cophase => PhasePolicy::CoPhase,
        }),
    );
    set(
        &mut s.ris_control.weighting,
        r.weighting.map(|w| match w {
            WeightingName::Count => SubArrayWeighting::ElementCount,
            WeightingName::Unit => SubArrayWeighting::Unit,
        }),
    );

    let c = &f.clusters;
    set_count(&mut s.clusters.count, c.count, "clusters.N")?;
    set_count(&mut s.clusters.rays_per_cluster, c.rays, "clusters.n_L")?;
    set(&mut s.clusters.box_min, c.box_min.map(vec3));
    set(&mut s.clusters.box_max, c.box_max.map(vec3));
    set(&mut s.clusters.ray_spread, c.ray_spread);
    Ok(s)
}

fn set<V>(slot: &mut V, value: Option<V>) {
    if let Some(v) = value {
        *slot = v;
    }
}

fn set_count(slot: &mut usize, value: Option<i64>, key: &str) -> Result<()> {
    if let Some(v) = value {
        *slot = count(v, key)?;
    }
    Ok(())
}

fn count(v: i64, key: &str) -> Result<usize> {
    usize::try_from(v)
        .ok()
        .filter(|&n| n >= 1)
        .ok_or_else(|| Error::config(key, format!("must be a positive integer, got {v}")))
}

fn vec3(a: [f64; 3]) -> Vec3<f64> {
    Vec3::new(a[0], a[1], a[2])
}

fn angle(radians: Option<f64>, degrees: Option<f64>, key: &str) -> Result<Option<f64>> {
    match (radians, degrees) {
        (Some(_), Some(_)) => Err(Error::config(
            key,
            format!("give either `{key}` or `{key}_deg`, not both"),
        )),
        (r, d) => Ok(r.or(d.map(f64::to_radians))),
    }
}

fn scaled(meters: Option<f64>, wavelengths: Option<f64>, lambda: f64, key: &str) -> Result<Option<f64>> {
    match (meters, wavelengths) {
        (Some(_), Some(_)) => Err(Error::config(
            key,
            format!("give either `{key}` or `{key}_wavelengths`, not both"),
        )),
        (m, w) => Ok(m.or(w.map(|w| w * lambda))),
    }
}

fn line_of(text: &str, offset: usize) -> usize {
    text[..offset.min(text.len())].matches('\n').count() + 1
}

/// First backquoted word of a parser message, e.g. the `foo` of
/// "unknown field `foo`".
fn quoted_key(message: &str) -> Option<String> {
    let start = message.find('`')? + 1;
    let len = message[start..].find('`')?;
    Some(message[start..start + len].to_owned())
}

/// Line of the assignment that set `key` (`section.leaf` or a top-level
/// leaf), matching the unit-suffixed spellings too.
fn locate(text: &str, key: &str) -> Option<usize> {
    let (section, leaf) = key.rsplit_once('.').unwrap_or(("", key));
    let mut current = String::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
            current = name.trim().to_owned();
            continue;
        }
        let Some((lhs, _)) = line.split_once('=') else { continue };
        let lhs = lhs.trim();
        let (sec, name) = match lhs.rsplit_once('.') {
            Some((s, n)) if current.is_empty() => (s.trim().to_owned(), n.trim()),
            _ => (current.clone(), lhs),
        };
        let matches = [leaf.to_owned(), format!("{leaf}_deg"), format!("{leaf}_wavelengths")]
            .iter()
            .any(|l| l == name);
        if sec == section && matches {
            return Some(i + 1);
        }
    }
    None
}
