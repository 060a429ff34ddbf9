//! Field-response multipath channel model.
//!
//! A far-field scene is described by the departure/arrival angles of its
//! propagation paths and a path response matrix referenced to the region
//! origins. An antenna at position `p` contributes a unit-modulus phase shift
//! per path, so the channel between antenna arrays factors as
//! `H = F^H * Sigma * G` with `G`/`F` the per-side field response matrices.

use std::f64::consts::PI;
use std::fs::File;
use std::io::{BufReader, BufWriter};
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{AntennaLayout, Position, Region};
use crate::{seed, C64, CMat, CVec};

/// Per-side propagation path angles, in radians within `[0, pi]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathSet {
    pub elevation: Vec<f64>,
    pub azimuth: Vec<f64>,
}

impl PathSet {
    pub fn new(elevation: Vec<f64>, azimuth: Vec<f64>) -> Result<Self> {
        let set = Self { elevation, azimuth };
        set.validate()?;
        Ok(set)
    }

    pub fn len(&self) -> usize {
        self.elevation.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elevation.is_empty()
    }

    pub fn validate(&self) -> Result<()> {
        if self.elevation.len() != self.azimuth.len() {
            return Err(Error::ShapeMismatch(format!(
                "path set has {} elevation but {} azimuth angles",
                self.elevation.len(),
                self.azimuth.len()
            )));
        }
        let in_range = |a: &f64| a.is_finite() && (0.0..=PI).contains(a);
        if !self.elevation.iter().all(in_range) || !self.azimuth.iter().all(in_range) {
            return Err(Error::Config("path angles must lie in [0, pi]".into()));
        }
        Ok(())
    }

    fn random(len: usize, rng: &mut ChaCha8Rng) -> Self {
        // draw order is part of the seeding contract: all elevations, then all azimuths
        let elevation = (0..len).map(|_| rng.random::<f64>() * PI).collect();
        let azimuth = (0..len).map(|_| rng.random::<f64>() * PI).collect();
        Self { elevation, azimuth }
    }
}

/// A fixed fading block: path angles on both sides, the path response matrix
/// coupling them, and the antenna movement constraints.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChannelScene {
    pub tx_paths: PathSet,
    pub rx_paths: PathSet,
    /// Path response matrix, `rx paths x tx paths`.
    #[serde(with = "crate::serde_support")]
    pub sigma: CMat,
    pub wavelength: f64,
    pub tx_region: Region,
    pub rx_region: Region,
    pub min_distance: f64,
}

impl ChannelScene {
    pub fn new(
        tx_paths: PathSet,
        rx_paths: PathSet,
        sigma: CMat,
        wavelength: f64,
        tx_region: Region,
        rx_region: Region,
        min_distance: f64,
    ) -> Result<Self> {
        let scene = Self {
            tx_paths,
            rx_paths,
            sigma,
            wavelength,
            tx_region,
            rx_region,
            min_distance,
        };
        scene.validate()?;
        Ok(scene)
    }

    pub fn validate(&self) -> Result<()> {
        self.tx_paths.validate()?;
        self.rx_paths.validate()?;
        if self.sigma.nrows() != self.rx_paths.len() || self.sigma.ncols() != self.tx_paths.len() {
            return Err(Error::ShapeMismatch(format!(
                "path response matrix is {}x{} but the scene has {} rx and {} tx paths",
                self.sigma.nrows(),
                self.sigma.ncols(),
                self.rx_paths.len(),
                self.tx_paths.len()
            )));
        }
        if !(self.wavelength > 0.0) {
            return Err(Error::Config("wavelength must be positive".into()));
        }
        if !self.sigma.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::Config("path response matrix must be finite".into()));
        }
        Ok(())
    }
}

/// Signal propagation difference of path `k` between `p` and the region
/// origin, in length units: `x sin(theta) cos(phi) + y cos(theta)`.
pub fn propagation_offset(p: Position, k: usize, paths: &PathSet) -> f64 {
    let theta = paths.elevation[k];
    let phi = paths.azimuth[k];
    p.x * theta.sin() * phi.cos() + p.y * theta.cos()
}

/// Field response vector of an antenna at `p`: unit-modulus phase shifts
/// `exp(j 2 pi rho_k / wavelength)` for every path.
pub fn field_response(p: Position, paths: &PathSet, wavelength: f64) -> CVec {
    CVec::from_iterator(
        paths.len(),
        (0..paths.len()).map(|k| {
            C64::from_polar(1.0, 2.0 * PI * propagation_offset(p, k, paths) / wavelength)
        }),
    )
}

/// Field response matrix of a whole layout: one column per antenna.
pub fn field_response_matrix(layout: &AntennaLayout, paths: &PathSet, wavelength: f64) -> CMat {
    let mut m = CMat::zeros(paths.len(), layout.count());
    for (n, &p) in layout.positions.iter().enumerate() {
        m.column_mut(n).copy_from(&field_response(p, paths, wavelength));
    }
    m
}

/// Channel matrix `H = F^H * Sigma * G` for the given antenna layouts,
/// shaped `rx antennas x tx antennas`.
pub fn assemble_channel(
    scene: &ChannelScene,
    tx: &AntennaLayout,
    rx: &AntennaLayout,
) -> Result<CMat> {
    if tx.count() == 0 || rx.count() == 0 {
        return Err(Error::ShapeMismatch(
            "channel assembly needs at least one antenna per side".into(),
        ));
    }
    let g = field_response_matrix(tx, &scene.tx_paths, scene.wavelength);
    let f = field_response_matrix(rx, &scene.rx_paths, scene.wavelength);
    Ok(f.adjoint() * &scene.sigma * g)
}

/// Randomly generated scene with `paths` paths per side, a diagonal path
/// response with i.i.d. CN(0, 1/paths) gains, i.i.d. uniform `[0, pi]`
/// angles, and square regions of side `region_size` centered at the origin.
///
/// Deterministic for a given seed. Substreams are keyed in a fixed order
/// (0: path response, 1: tx angles, 2: rx angles) so adding scene components
/// can never perturb earlier draws.
pub fn random_scene(
    paths: usize,
    wavelength: f64,
    region_size: f64,
    min_distance: f64,
    seed: u64,
) -> ChannelScene {
    assert!(paths >= 1, "a scene needs at least one path");
    let mut sigma_rng = ChaCha8Rng::seed_from_u64(seed::mix(seed, 0));
    let mut tx_rng = ChaCha8Rng::seed_from_u64(seed::mix(seed, 1));
    let mut rx_rng = ChaCha8Rng::seed_from_u64(seed::mix(seed, 2));

    // CN(0, v) as independent N(0, v/2) real and imaginary parts
    let component_std = (1.0 / (2.0 * paths as f64)).sqrt();
    let mut sigma = CMat::zeros(paths, paths);
    for p in 0..paths {
        let re: f64 = sigma_rng.sample(StandardNormal);
        let im: f64 = sigma_rng.sample(StandardNormal);
        sigma[(p, p)] = C64::new(re * component_std, im * component_std);
    }

    ChannelScene {
        tx_paths: PathSet::random(paths, &mut tx_rng),
        rx_paths: PathSet::random(paths, &mut rx_rng),
        sigma,
        wavelength,
        tx_region: Region::square(region_size),
        rx_region: Region::square(region_size),
        min_distance,
    }
}

/// Write a scene to a JSON file (complex entries as `[re, im]` pairs).
pub fn save_scene(scene: &ChannelScene, path: &Path) -> Result<()> {
    let file = File::create(path).map_err(|source| Error::Io {
        path: path.to_owned(),
        source,
    })?;
    serde_json::to_writer_pretty(BufWriter::new(file), scene).map_err(|source| {
        Error::Serialization {
            path: path.to_owned(),
            source,
        }
    })
}

/// Read a scene back from [`save_scene`] output, re-validating invariants.
pub fn load_scene(path: &Path) -> Result<ChannelScene> {
    let file = File::open(path).map_err(|source| Error::Io {
        path: path.to_owned(),
        source,
    })?;
    let scene: ChannelScene =
        serde_json::from_reader(BufReader::new(file)).map_err(|source| Error::Serialization {
            path: path.to_owned(),
            source,
        })?;
    scene.validate()?;
    Ok(scene)
}
