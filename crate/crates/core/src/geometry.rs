//! Gaussian-beam propagation through the collection optics and the
//! aperture-squared solid-angle ratio of a collection channel.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum OpticalElement {
    FreeSpace { length: f64 },
    ThinLens { focal_length: f64 },
}

/// A Gaussian beam launched from its waist at the source plane, followed by
/// a sequence of optical elements. All lengths in meters; diameters are
/// 1/e^2 intensity full widths.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BeamPath {
    pub wavelength: f64,
    pub source_waist_radius: f64,
    pub elements: Vec<OpticalElement>,
}

impl BeamPath {
    pub fn new(wavelength: f64, source_waist_radius: f64, elements: Vec<OpticalElement>) -> Result<Self> {
        let path = Self { wavelength, source_waist_radius, elements };
        path.validate()?;
        Ok(path)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.wavelength > 0.0) || !(self.source_waist_radius > 0.0) {
            return Err(Error::InvalidArgument("wavelength and source waist radius must be positive".into()));
        }
        for el in &self.elements {
            match *el {
                OpticalElement::FreeSpace { length } if !(length >= 0.0) => {
                    return Err(Error::InvalidArgument(format!("negative free-space length {length}")));
                }
                OpticalElement::ThinLens { focal_length } if focal_length == 0.0 || !focal_length.is_finite() => {
                    return Err(Error::InvalidArgument("thin lens focal length must be nonzero".into()));
                }
                _ => {}
            }
        }
        Ok(())
    }

    pub fn total_length(&self) -> f64 {
        self.elements
            .iter()
            .map(|el| match el {
                OpticalElement::FreeSpace { length } => *length,
                OpticalElement::ThinLens { .. } => 0.0,
            })
            .sum()
    }

    /// Rayleigh range of the source beam.
    pub fn rayleigh_range(&self) -> f64 {
        std::f64::consts::PI * self.source_waist_radius.powi(2) / self.wavelength
    }

    /// Plane positions of the element boundaries, starting with 0.
    pub fn segment_boundaries(&self) -> Vec<f64> {
        let mut z = 0.0;
        let mut out = vec![0.0];
        for el in &self.elements {
            if let OpticalElement::FreeSpace { length } = el {
                z += length;
                out.push(z);
            }
        }
        out
    }

    fn beam_radius(&self, q: Complex64) -> f64 {
        // 1/q = 1/R - i lambda / (pi w^2)
        let inv = q.inv();
        (-self.wavelength / (std::f64::consts::PI * inv.im)).sqrt()
    }
}

/// Beam diameter `2 w(z)` at distance `z` from the source plane.
pub fn propagate_beam(path: &BeamPath, z: f64) -> Result<f64> {
    path.validate()?;
    let total = path.total_length();
    if !(0.0..=total).contains(&z) {
        return Err(Error::InvalidArgument(format!("position {z} m is outside the path [0, {total}] m")));
    }
    let mut q = Complex64::new(0.0, path.rayleigh_range());
    let mut pos = 0.0;
    for el in &path.elements {
        match *el {
            OpticalElement::ThinLens { focal_length } => {
                q = (q.inv() - 1.0 / focal_length).inv();
            }
            OpticalElement::FreeSpace { length } => {
                let step = length.min(z - pos);
                q += step;
                pos += step;
                if pos >= z && step < length {
                    break;
                }
            }
        }
    }
    Ok(2.0 * path.beam_radius(q))
}

/// `(z, diameter)` samples at `n` evenly spaced planes covering the path.
pub fn beam_profile(path: &BeamPath, n: usize) -> Result<Vec<(f64, f64)>> {
    let total = path.total_length();
    let n = n.max(2);
    (0..n)
        .map(|i| {
            let z = total * i as f64 / (n - 1) as f64;
            propagate_beam(path, z).map(|d| (z, d))
        })
        .collect()
}

/// Collimator beam diameters of the write (Stokes) and read (anti-Stokes)
/// collectors, meters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelGeometry {
    pub write_aperture_diameter: f64,
    pub read_aperture_diameter: f64,
}

/// Write-to-read solid-angle ratio `(A_w / A_r)^2`.
pub fn solid_angle_ratio(geometry: &ChannelGeometry) -> Result<f64> {
    if !(geometry.write_aperture_diameter > 0.0 && geometry.read_aperture_diameter > 0.0) {
        return Err(Error::InvalidArgument("aperture diameters must be positive".into()));
    }
    Ok((geometry.write_aperture_diameter / geometry.read_aperture_diameter).powi(2))
}

pub const WAVELENGTH: f64 = 795e-9;

/// Asymmetric channel: 2.6 mm write collimator, f = 2.4 m lens right after
/// it, 1.2 mm read collimator 2.45 m away, atoms a further 1.25 m on.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Ch1Preset {
    pub geometry: ChannelGeometry,
    pub path: BeamPath,
    /// Stated beam diameter at the read collimator, meters.
    pub stated_read_diameter: f64,
    /// Stated beam diameter at the atoms, meters.
    pub stated_atom_diameter: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChannelPresets {
    pub ch1: Ch1Preset,
    pub ch2: ChannelGeometry,
}

pub fn channel_presets() -> ChannelPresets {
    let ch1 = Ch1Preset {
        geometry: ChannelGeometry { write_aperture_diameter: 2.6e-3, read_aperture_diameter: 1.2e-3 },
        path: BeamPath {
            wavelength: WAVELENGTH,
            source_waist_radius: 1.3e-3,
            elements: vec![
                OpticalElement::ThinLens { focal_length: 2.4 },
                OpticalElement::FreeSpace { length: 2.45 },
                OpticalElement::FreeSpace { length: 1.25 },
            ],
        },
        stated_read_diameter: 1.2e-3,
        stated_atom_diameter: 1.3e-3,
    };
    // Same collimator model on both arms.
    let ch2 = ChannelGeometry { write_aperture_diameter: 1.2e-3, read_aperture_diameter: 1.2e-3 };
    ChannelPresets { ch1, ch2 }
}
