//! Gray-labelled PSK and square-QAM constellations with unit average energy.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{bail, Result};
use crate::real::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConstellationKind {
    Psk,
    Qam,
}

/// Serializable description of a constellation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ConstellationSpec {
    pub kind: ConstellationKind,
    pub order: usize,
}

impl ConstellationSpec {
    pub fn psk(order: usize) -> Self {
        Self { kind: ConstellationKind::Psk, order }
    }

    pub fn qam(order: usize) -> Self {
        Self { kind: ConstellationKind::Qam, order }
    }

    pub fn bits_per_symbol(&self) -> usize {
        self.order.trailing_zeros() as usize
    }

    pub fn validate(&self) -> Result<()> {
        if ![2, 4, 8, 16, 32, 64].contains(&self.order) {
            bail!(Config, "unsupported constellation order {}", self.order);
        }
        if self.kind == ConstellationKind::Qam && ![4, 16, 64].contains(&self.order) {
            bail!(Config, "QAM requires a square order (4, 16, 64), got {}", self.order);
        }
        Ok(())
    }

    pub fn label(&self) -> String {
        match self.kind {
            ConstellationKind::Psk if self.order == 2 => "BPSK".into(),
            ConstellationKind::Psk if self.order == 4 => "QPSK".into(),
            ConstellationKind::Psk => format!("{}PSK", self.order),
            ConstellationKind::Qam => format!("{}QAM", self.order),
        }
    }
}

impl std::str::FromStr for ConstellationSpec {
    type Err = crate::Error;

    /// Accepts `bpsk`, `qpsk`, `<M>psk` and `<M>qam` (case-insensitive).
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().to_ascii_lowercase();
        let spec = match t.as_str() {
            "bpsk" => Self::psk(2),
            "qpsk" => Self::psk(4),
            _ => {
                let (digits, kind) = if let Some(d) = t.strip_suffix("psk") {
                    (d, ConstellationKind::Psk)
                } else if let Some(d) = t.strip_suffix("qam") {
                    (d, ConstellationKind::Qam)
                } else {
                    bail!(Config, "unknown constellation `{s}`");
                };
                let order = digits.trim_end_matches('-').parse().map_err(|_| crate::Error::Config(format!("unknown constellation `{s}`")))?;
                Self { kind, order }
            }
        };
        spec.validate()?;
        Ok(spec)
    }
}

impl std::fmt::Display for ConstellationSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.label())
    }
}

/// Points are stored by bit label: `points()[label]` is the symbol whose
/// Gray label, read MSB-first, equals `label`.
#[derive(Debug, Clone, PartialEq)]
pub struct Constellation<T> {
    spec: ConstellationSpec,
    points: Vec<Complex<T>>,
}

fn gray(i: usize) -> usize {
    i ^ (i >> 1)
}

impl<T: Real> Constellation<T> {
    pub fn new(kind: ConstellationKind, order: usize) -> Result<Self> {
        Self::from_spec(ConstellationSpec { kind, order })
    }

    pub fn from_spec(spec: ConstellationSpec) -> Result<Self> {
        spec.validate()?;
        let m = spec.order;
        let mut pts = vec![Complex::new(0.0f64, 0.0); m];
        match spec.kind {
            ConstellationKind::Psk => {
                for i in 0..m {
                    let phase = 2.0 * std::f64::consts::PI * i as f64 / m as f64;
                    pts[gray(i)] = Complex::from_polar(1.0, phase);
                }
                // exact axes for the points that land on them
                for p in pts.iter_mut() {
                    if p.re.abs() < 1e-15 {
                        p.re = 0.0;
                    }
                    if p.im.abs() < 1e-15 {
                        p.im = 0.0;
                    }
                }
            }
            ConstellationKind::Qam => {
                let side = (m as f64).sqrt().round() as usize;
                let half = spec.bits_per_symbol() / 2;
                let scale = (2.0 * (m as f64 - 1.0) / 3.0).sqrt();
                for i in 0..side {
                    for q in 0..side {
                        let re = (2 * i) as f64 - (side - 1) as f64;
                        let im = (2 * q) as f64 - (side - 1) as f64;
                        let label = (gray(i) << half) | gray(q);
                        pts[label] = Complex::new(re / scale, im / scale);
                    }
                }
            }
        }
        let points = pts
            .into_iter()
            .map(|p| Complex::new(T::lit(p.re), T::lit(p.im)))
            .collect();
        Ok(Self { spec, points })
    }

    /// The same labelling with every point multiplied by `e^{j angle}`.
    pub fn rotated(mut self, angle: f64) -> Self {
        let r = Complex::from_polar(T::one(), T::lit(angle));
        for p in self.points.iter_mut() {
            *p *= r;
        }
        self
    }

    pub fn spec(&self) -> ConstellationSpec {
        self.spec
    }

    pub fn kind(&self) -> ConstellationKind {
        self.spec.kind
    }

    pub fn order(&self) -> usize {
        self.spec.order
    }

    pub fn bits_per_symbol(&self) -> usize {
        self.spec.bits_per_symbol()
    }

    pub fn points(&self) -> &[Complex<T>] {
        &self.points
    }

    pub fn point(&self, label: usize) -> Complex<T> {
        self.points[label]
    }

    /// Label of the point nearest to `z / scale`; ties go to the lowest label.
    pub fn demap(&self, z: Complex<T>, scale: T) -> usize {
        let mut best = 0;
        let mut best_d = T::infinity();
        for (label, p) in self.points.iter().enumerate() {
            let d = (z - p.scale(scale)).norm_sqr();
            if d < best_d {
                best_d = d;
                best = label;
            }
        }
        best
    }

    pub fn average_energy(&self) -> T {
        self.points.iter().map(|p| p.norm_sqr()).sum::<T>() / T::of_usize(self.points.len())
    }
}
