//! Jones-calculus wave plates, the polarization-dependent loss element and
//! numerical synthesis of setting angles.
//!
//! Matrices act on the `{|H⟩, |V⟩}` basis; two-qubit circuits use the
//! path-polarization ordering `|u,H⟩, |u,V⟩, |d,H⟩, |d,V⟩`.

mod compile;

pub use compile::{
    compile_single_qubit, compile_two_qubit, phase_aligned_residual, CompileOptions, PASSIVE_TOL, SUCCESS_RESIDUAL,
    UNITARY_TOL,
};

use std::f64::consts::{FRAC_PI_4, PI};
use std::fmt;
use std::str::FromStr;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::qcore::ComplexMatrix;

type C = Complex<f64>;
type M = ComplexMatrix<f64>;

/// Quarter-wave plate with fast axis at `phi`.
pub fn qwp(phi: f64) -> M {
    let (s, c) = phi.sin_cos();
    let off = C::new(1.0, -1.0) * (s * c);
    M::from_rows2([
        [C::new(c * c, s * s), off],
        [off, C::new(s * s, c * c)],
    ])
}

/// Half-wave plate at `theta`.
pub fn hwp(theta: f64) -> M {
    let (s, c) = (2.0 * theta).sin_cos();
    M::from_rows2([[C::new(c, 0.0), C::new(s, 0.0)], [C::new(s, 0.0), C::new(-c, 0.0)]])
}

/// Sandwich `qwp(outer)·hwp(theta)·qwp(inner)`.
pub fn rotation(outer: f64, theta: f64, inner: f64) -> M {
    qwp(outer) * hwp(theta) * qwp(inner)
}

/// Loss element with the inner quarter-wave plates removed: `[[0, sin2θ_V], [sin2θ_H, 0]]`.
pub fn loss_simplified(theta_h: f64, theta_v: f64) -> M {
    let z = C::new(0.0, 0.0);
    M::from_rows2([[z, C::new((2.0 * theta_v).sin(), 0.0)], [C::new((2.0 * theta_h).sin(), 0.0), z]])
}

/// Loss element `[[0, ξ], [η, 0]]` with all four inner quarter-wave plates.
pub fn loss_full(phi6: f64, theta_h: f64, phi5: f64, phi4: f64, theta_v: f64, phi3: f64) -> M {
    let s2 = |x: f64| (2.0 * x).sin();
    let xi = C::new(
        -s2(theta_v - phi3) + s2(theta_v - phi4),
        s2(theta_v) + s2(theta_v - phi3 - phi4),
    ) * 0.5;
    let eta = C::new(
        s2(theta_h - phi5) - s2(theta_h - phi6),
        s2(theta_h) + s2(theta_h - phi5 - phi6),
    ) * 0.5;
    let z = C::new(0.0, 0.0);
    M::from_rows2([[z, xi], [eta, z]])
}

/// Two-qubit element with `sin2δ₃₁ = sin2δ₄₂ = 1`.
pub fn build_g1(delta41: f64) -> M {
    build_g(1.0, delta41, 1.0)
}

/// Two-qubit element with all three angles free.
pub fn build_g2(delta75: f64, delta85: f64, delta86: f64) -> M {
    build_g((2.0 * delta75).sin(), delta85, (2.0 * delta86).sin())
}

fn build_g(top: f64, mid: f64, bottom: f64) -> M {
    let r = |x: f64| C::new(x, 0.0);
    let (s, c) = (2.0 * mid).sin_cos();
    let z = r(0.0);
    M::from_rows4([
        [z, r(-top), z, z],
        [r(s), z, z, r(c)],
        [r(c), z, z, r(-s)],
        [z, z, r(bottom), z],
    ])
}

/// `x` wrapped to `(−π, π]`.
pub fn wrap_angle(x: f64) -> f64 {
    let w = x - 2.0 * PI * ((x - PI) / (2.0 * PI)).ceil();
    if w <= -PI {
        w + 2.0 * PI
    } else {
        w
    }
}

/// Which setting angles are free in a circuit layout.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DecompositionVariant {
    /// Both rotation sandwiches and the loss element with four inner plates; 12 angles.
    Full12Param,
    /// Simplified loss element and `φ₂ = 0`; 7 angles.
    Symmetric5Param,
    /// Outer quarter-wave plates removed, `φ₁ = 0`, `θ₁ = θ₂ + π/4`, `φ₇ = 2θ₂`; 3 angles.
    PTSimplified,
    /// Six rotation sandwiches and two beam-displacer elements; 22 angles.
    TwoQubit,
}

const FULL_NAMES: [&str; 12] = [
    "phi1", "theta1", "phi2", "phi3", "phi4", "theta_V", "phi5", "phi6", "theta_H", "phi7", "theta2", "phi8",
];
const SYMMETRIC_NAMES: [&str; 7] = ["phi1", "theta1", "theta_H", "theta_V", "phi7", "theta2", "phi8"];
const PT_NAMES: [&str; 3] = ["theta2", "theta_H", "theta_V"];
const TWO_QUBIT_NAMES: [&str; 22] = [
    "nu1", "theta_t1", "phi_t1", "nu2", "theta_t2", "phi_t2", "nu3", "theta_t3", "phi_t3", "nu4", "theta_t4",
    "phi_t4", "nu5", "theta_t5", "phi_t5", "nu6", "theta_t6", "phi_t6", "delta41", "delta75", "delta85", "delta86",
];

impl DecompositionVariant {
    pub const ALL: [Self; 4] = [Self::Full12Param, Self::Symmetric5Param, Self::PTSimplified, Self::TwoQubit];

    pub fn name(self) -> &'static str {
        match self {
            Self::Full12Param => "full12",
            Self::Symmetric5Param => "symmetric5",
            Self::PTSimplified => "pt-simplified",
            Self::TwoQubit => "two-qubit",
        }
    }

    /// Names of the free angles, in parameter order.
    pub fn param_names(self) -> &'static [&'static str] {
        match self {
            Self::Full12Param => &FULL_NAMES,
            Self::Symmetric5Param => &SYMMETRIC_NAMES,
            Self::PTSimplified => &PT_NAMES,
            Self::TwoQubit => &TWO_QUBIT_NAMES,
        }
    }

    pub fn num_params(self) -> usize {
        self.param_names().len()
    }

    /// Dimension of the realized operator.
    pub fn dim(self) -> usize {
        match self {
            Self::TwoQubit => 4,
            _ => 2,
        }
    }

    /// Free angles plus the angles fixed by constraints.
    pub fn named_angles(self, params: &[f64]) -> Vec<(&'static str, f64)> {
        let mut out: Vec<(&'static str, f64)> = self.param_names().iter().copied().zip(params.iter().copied()).collect();
        match self {
            Self::Symmetric5Param => out.push(("phi2", 0.0)),
            Self::PTSimplified => {
                let theta2 = params[0];
                out.extend([("phi1", 0.0), ("theta1", theta2 + FRAC_PI_4), ("phi7", 2.0 * theta2)]);
            }
            _ => {}
        }
        out.into_iter().map(|(k, v)| (k, wrap_angle(v))).collect()
    }
}

impl fmt::Display for DecompositionVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for DecompositionVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "full12" | "full12param" | "full" => Ok(Self::Full12Param),
            "symmetric5" | "symmetric5param" | "symmetric" => Ok(Self::Symmetric5Param),
            "pt-simplified" | "ptsimplified" | "pt" => Ok(Self::PTSimplified),
            "two-qubit" | "twoqubit" => Ok(Self::TwoQubit),
            _ => Err(Error::InvalidParameters(format!("unknown decomposition variant {s:?}"))),
        }
    }
}

/// Full loss element for an angle map, or the simplified one.
pub fn loss_operator(variant: DecompositionVariant, params: &[f64]) -> Result<M> {
    check_len(variant, params)?;
    let p = params;
    match variant {
        DecompositionVariant::Full12Param => Ok(loss_full(p[7], p[8], p[6], p[4], p[5], p[3])),
        DecompositionVariant::Symmetric5Param => Ok(loss_simplified(p[2], p[3])),
        DecompositionVariant::PTSimplified => Ok(loss_simplified(p[1], p[2])),
        DecompositionVariant::TwoQubit => {
            Err(Error::InvalidParameters("the two-qubit layout has no loss element".into()))
        }
    }
}

fn check_len(variant: DecompositionVariant, params: &[f64]) -> Result<()> {
    if params.len() != variant.num_params() {
        return Err(Error::InvalidParameters(format!(
            "{variant} takes {} angles, got {}",
            variant.num_params(),
            params.len()
        )));
    }
    if params.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidParameters("non-finite angle".into()));
    }
    Ok(())
}

/// Operator realized by a single-qubit layout.
pub fn realize_single(variant: DecompositionVariant, params: &[f64]) -> Result<M> {
    check_len(variant, params)?;
    if variant == DecompositionVariant::TwoQubit {
        return Err(Error::InvalidParameters("two-qubit layout passed to realize_single".into()));
    }
    Ok(realize_unchecked(variant, params))
}

/// Operator realized by the two-qubit layout.
pub fn realize_two_qubit(params: &[f64]) -> Result<M> {
    check_len(DecompositionVariant::TwoQubit, params)?;
    Ok(realize_unchecked(DecompositionVariant::TwoQubit, params))
}

/// Any layout, no validation.
pub(crate) fn realize_unchecked(variant: DecompositionVariant, p: &[f64]) -> M {
    match variant {
        DecompositionVariant::Full12Param => {
            rotation(p[11], p[10], p[9]) * loss_full(p[7], p[8], p[6], p[4], p[5], p[3]) * rotation(p[2], p[1], p[0])
        }
        DecompositionVariant::Symmetric5Param => {
            rotation(p[6], p[5], p[4]) * loss_simplified(p[2], p[3]) * rotation(0.0, p[1], p[0])
        }
        DecompositionVariant::PTSimplified => {
            let theta2 = p[0];
            hwp(theta2) * qwp(2.0 * theta2) * loss_simplified(p[1], p[2]) * hwp(theta2 + FRAC_PI_4) * qwp(0.0)
        }
        DecompositionVariant::TwoQubit => {
            let u = |j: usize| rotation(p[3 * j], p[3 * j + 1], p[3 * j + 2]);
            let layer = |j: usize| M::block_diag(&u(j), &u(j + 1)).expect("2x2 blocks");
            layer(4) * build_g2(p[19], p[20], p[21]) * layer(2) * build_g1(p[18]) * layer(0)
        }
    }
}

/// Setting angles found by the compiler for one target.
#[derive(Debug, Clone, PartialEq)]
pub struct AngleSolution {
    pub variant: DecompositionVariant,
    /// Free angles in [`DecompositionVariant::param_names`] order, wrapped to `(−π, π]`.
    pub params: Vec<f64>,
    /// Frobenius distance to the phase-aligned target.
    pub residual: f64,
    /// `φ` with realized ≈ `e^{iφ}`·target.
    pub global_phase: f64,
}

impl AngleSolution {
    pub fn named_angles(&self) -> Vec<(&'static str, f64)> {
        self.variant.named_angles(&self.params)
    }

    /// Operator realized by these angles.
    pub fn realize(&self) -> M {
        realize_unchecked(self.variant, &self.params)
    }

    pub fn is_success(&self) -> bool {
        self.residual < SUCCESS_RESIDUAL
    }

    /// Flat `key=value` lines: variant, every named angle, residual, global phase.
    pub fn to_record(&self) -> String {
        let mut out = format!("variant={}\n", self.variant);
        for (k, v) in self.named_angles() {
            out.push_str(&format!("{k}={v:.16e}\n"));
        }
        out.push_str(&format!("residual={:.16e}\nglobal_phase={:.16e}\n", self.residual, self.global_phase));
        out
    }

    /// Inverse of [`Self::to_record`]; derived angles are ignored.
    pub fn from_record(text: &str) -> Result<Self> {
        let mut variant = None;
        let mut fields = std::collections::HashMap::new();
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty()) {
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::InvalidParameters(format!("malformed record line {line:?}")))?;
            if k == "variant" {
                variant = Some(v.parse::<DecompositionVariant>()?);
            } else {
                let x: f64 = v
                    .parse()
                    .map_err(|_| Error::InvalidParameters(format!("bad number for {k}: {v:?}")))?;
                fields.insert(k.to_string(), x);
            }
        }
        let variant = variant.ok_or_else(|| Error::InvalidParameters("record has no variant".into()))?;
        let get = |k: &str| {
            fields
                .get(k)
                .copied()
                .ok_or_else(|| Error::InvalidParameters(format!("record is missing {k}")))
        };
        let params = variant.param_names().iter().map(|k| get(k)).collect::<Result<Vec<_>>>()?;
        Ok(Self { variant, params, residual: get("residual")?, global_phase: get("global_phase")? })
    }
}
