//! Rotation-error model, symmetric Pauli channel and entropy matching.
//!
//! A coherent gate error is the single-qubit unitary
//!
//! ```text
//! U(θ, α, β) = [ e^{iα} cos θ     i e^{iβ} sin θ ]
//!              [ i e^{-iβ} sin θ  e^{-iα} cos θ  ]
//! ```
//!
//! applied in its reduced form `α = β = φ`. The angles `(θ, φ)` are drawn
//! either from an isotropic Gaussian of per-component width `σ`, or as the
//! tangent-plane coordinates of a von Mises–Fisher axis tilt of concentration
//! `κ`. The two are tied by `σ = κ^{-1/2}`.
//!
//! Pauli and rotation noise are compared through the readout bit-flip
//! probability: `2p/3` for the Pauli channel, `(1 − L(κ))/2` for vMF, where
//! `L` is the Langevin function. Equal bit-flip probability on `[0, 1/2]` is
//! the same as equal binary entropy.

use std::f64::consts::PI;
use std::fmt;
use std::ops::Mul;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

const C0: Complex64 = Complex64::new(0.0, 0.0);
const C1: Complex64 = Complex64::new(1.0, 0.0);
const CI: Complex64 = Complex64::new(0.0, 1.0);

/// Row-major 2×2 complex matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Matrix2(pub [[Complex64; 2]; 2]);

impl Matrix2 {
    pub const IDENTITY: Matrix2 = Matrix2([[C1, C0], [C0, C1]]);
    pub const X: Matrix2 = Matrix2([[C0, C1], [C1, C0]]);
    pub const Y: Matrix2 = Matrix2([[C0, Complex64::new(0.0, -1.0)], [CI, C0]]);
    pub const Z: Matrix2 = Matrix2([[C1, C0], [C0, Complex64::new(-1.0, 0.0)]]);
    pub const S: Matrix2 = Matrix2([[C1, C0], [C0, CI]]);
    pub const H: Matrix2 = {
        let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let mh = Complex64::new(-std::f64::consts::FRAC_1_SQRT_2, 0.0);
        Matrix2([[h, h], [h, mh]])
    };

    pub fn adjoint(&self) -> Matrix2 {
        let m = &self.0;
        Matrix2([[m[0][0].conj(), m[1][0].conj()], [m[0][1].conj(), m[1][1].conj()]])
    }

    /// `max |(U†U − I)_ij|`.
    pub fn unitarity_defect(&self) -> f64 {
        let p = self.adjoint() * *self;
        let mut worst: f64 = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                let target = if i == j { C1 } else { C0 };
                worst = worst.max((p.0[i][j] - target).norm());
            }
        }
        worst
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().flatten().all(|c| c.re.is_finite() && c.im.is_finite())
    }
}

impl Mul for Matrix2 {
    type Output = Matrix2;

    fn mul(self, rhs: Matrix2) -> Matrix2 {
        let (a, b) = (&self.0, &rhs.0);
        let mut out = [[C0; 2]; 2];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        Matrix2(out)
    }
}

/// A non-identity single-qubit Pauli.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PauliAxis {
    X,
    Y,
    Z,
}

impl PauliAxis {
    pub const ALL: [PauliAxis; 3] = [PauliAxis::X, PauliAxis::Y, PauliAxis::Z];

    pub fn matrix(self) -> Matrix2 {
        match self {
            PauliAxis::X => Matrix2::X,
            PauliAxis::Y => Matrix2::Y,
            PauliAxis::Z => Matrix2::Z,
        }
    }

    pub fn letter(self) -> char {
        match self {
            PauliAxis::X => 'X',
            PauliAxis::Y => 'Y',
            PauliAxis::Z => 'Z',
        }
    }

    pub fn from_letter(c: char) -> Option<PauliAxis> {
        match c {
            'X' => Some(PauliAxis::X),
            'Y' => Some(PauliAxis::Y),
            'Z' => Some(PauliAxis::Z),
            _ => None,
        }
    }
}

impl fmt::Display for PauliAxis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

/// Polar and azimuthal error angles of one rotation error.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct AngleSample {
    pub theta: f64,
    pub phi: f64,
}

impl AngleSample {
    /// The reduced error unitary `U(θ, φ, φ)`.
    pub fn unitary(&self) -> Result<Matrix2> {
        error_unitary(self.theta, self.phi, self.phi)
    }
}

/// The noise family applied after single-qubit gates.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NoiseSpec {
    /// Symmetric Pauli channel: X, Y, Z each with probability `p/3`.
    Pauli { p: f64 },
    /// Isotropic Gaussian rotation angles with per-component width `sigma`.
    Gaussian { sigma: f64 },
    /// von Mises–Fisher axis tilt with concentration `kappa`.
    Vmf { kappa: f64 },
}

impl NoiseSpec {
    pub fn validate(&self) -> Result<()> {
        match *self {
            NoiseSpec::Pauli { p } => check_probability(p, "pauli rate"),
            NoiseSpec::Gaussian { sigma } if sigma.is_nan() || sigma < 0.0 => {
                Err(domain(format!("sigma must be >= 0, got {sigma}")))
            }
            NoiseSpec::Vmf { kappa } => check_kappa(kappa),
            NoiseSpec::Gaussian { .. } => Ok(()),
        }
    }

    /// Draw one rotation error. Pauli specs have no rotation and yield an error.
    pub fn sample_angles<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<AngleSample> {
        match *self {
            NoiseSpec::Gaussian { sigma } => sample_gaussian_angles(sigma, rng),
            NoiseSpec::Vmf { kappa } => sample_vmf_angles(kappa, rng),
            NoiseSpec::Pauli { .. } => Err(domain("a Pauli channel has no rotation angles")),
        }
    }
}

fn check_probability(x: f64, what: &str) -> Result<()> {
    if (0.0..=1.0).contains(&x) {
        Ok(())
    } else {
        Err(domain(format!("{what} must lie in [0, 1], got {x}")))
    }
}

fn check_kappa(kappa: f64) -> Result<()> {
    if kappa > 0.0 && !kappa.is_nan() {
        Ok(())
    } else {
        Err(domain(format!("kappa must be > 0, got {kappa}")))
    }
}

/// `U(θ, α, β)`; callers modelling gate errors pass `α = β = φ`.
pub fn error_unitary(theta: f64, alpha: f64, beta: f64) -> Result<Matrix2> {
    if !(theta.is_finite() && alpha.is_finite() && beta.is_finite()) {
        return Err(domain(format!(
            "error_unitary angles must be finite, got ({theta}, {alpha}, {beta})"
        )));
    }
    let (s, c) = theta.sin_cos();
    let ea = Complex64::from_polar(1.0, alpha);
    let eb = Complex64::from_polar(1.0, beta);
    Ok(Matrix2([
        [ea * c, CI * eb * s],
        [CI * eb.conj() * s, ea.conj() * c],
    ]))
}

/// Two independent `N(0, σ²)` deviates.
pub fn sample_gaussian_angles<R: Rng + ?Sized>(sigma: f64, rng: &mut R) -> Result<AngleSample> {
    if sigma.is_nan() || sigma < 0.0 {
        return Err(domain(format!("sigma must be >= 0, got {sigma}")));
    }
    let theta: f64 = StandardNormal.sample(rng);
    let phi: f64 = StandardNormal.sample(rng);
    Ok(AngleSample { theta: sigma * theta, phi: sigma * phi })
}

/// `cos λ` for a vMF-distributed axis on the sphere, by inverse transform:
/// `cos λ = 1 + κ⁻¹ ln(u + (1 − u) e^{−2κ})`.
pub fn sample_vmf_cos_misalignment<R: Rng + ?Sized>(kappa: f64, rng: &mut R) -> Result<f64> {
    check_kappa(kappa)?;
    // u in (0, 1] keeps the logarithm finite once e^{-2κ} underflows.
    let u = 1.0 - rng.random::<f64>();
    let w = 1.0 + (u + (1.0 - u) * (-2.0 * kappa).exp()).ln() / kappa;
    Ok(w.clamp(-1.0, 1.0))
}

/// Tangent-plane coordinates `(λ cos ψ, λ sin ψ)` of a vMF axis tilt `λ`
/// with uniform azimuth `ψ`. Per-component variance tends to `1/κ`.
pub fn sample_vmf_angles<R: Rng + ?Sized>(kappa: f64, rng: &mut R) -> Result<AngleSample> {
    let lambda = sample_vmf_cos_misalignment(kappa, rng)?.acos();
    let psi = 2.0 * PI * rng.random::<f64>();
    let (s, c) = psi.sin_cos();
    Ok(AngleSample { theta: lambda * c, phi: lambda * s })
}

/// `L(κ) = coth κ − 1/κ`, the mean of `cos λ` under vMF.
pub fn langevin(kappa: f64) -> Result<f64> {
    check_kappa(kappa)?;
    if kappa < 1e-4 {
        return Ok(kappa / 3.0 - kappa.powi(3) / 45.0);
    }
    Ok(1.0 / kappa.tanh() - 1.0 / kappa)
}

/// Readout flip probability of the symmetric Pauli channel: `2p/3`.
pub fn pbf_pauli(p: f64) -> Result<f64> {
    check_probability(p, "pauli rate")?;
    Ok(2.0 * p / 3.0)
}

/// Readout flip probability of vMF noise: `(1 − L(κ))/2`.
pub fn pbf_vmf(kappa: f64) -> Result<f64> {
    check_kappa(kappa)?;
    if kappa < 1.0 {
        return Ok(0.5 * (1.0 - langevin(kappa)?));
    }
    // 1 − coth κ = −2 / (e^{2κ} − 1); avoids cancelling against L ≈ 1.
    Ok(0.5 * (1.0 / kappa - 2.0 / (2.0 * kappa).exp_m1()))
}

/// `h₂(x)` in bits, with `0 log 0 = 0`.
pub fn binary_entropy(x: f64) -> Result<f64> {
    check_probability(x, "binary entropy argument")?;
    let term = |t: f64| if t == 0.0 { 0.0 } else { -t * t.log2() };
    Ok(term(x) + term(1.0 - x))
}

const KAPPA_MIN: f64 = 1e-8;
const KAPPA_MAX: f64 = 1e16;
const BISECTION_CAP: usize = 200;

/// The vMF concentration whose flip probability equals that of a Pauli
/// channel of rate `p`. Requires `p ∈ (0, 3/4)`.
pub fn match_kappa(p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 0.75) {
        return Err(domain(format!("match_kappa needs p in (0, 3/4), got {p}")));
    }
    let target = pbf_pauli(p)?;
    let (mut lo, mut hi) = (KAPPA_MIN.ln(), KAPPA_MAX.ln());
    if pbf_vmf(KAPPA_MIN)? < target || pbf_vmf(KAPPA_MAX)? > target {
        return Err(Error::Numeric(format!(
            "flip probability {target} outside the bracket kappa in [{KAPPA_MIN:e}, {KAPPA_MAX:e}]"
        )));
    }
    for _ in 0..BISECTION_CAP {
        let mid = 0.5 * (lo + hi);
        // pbf_vmf is decreasing in kappa.
        if pbf_vmf(mid.exp())? > target {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= f64::EPSILON * hi.abs().max(1.0) {
            break;
        }
    }
    let kappa = (0.5 * (lo + hi)).exp();
    let rel = (pbf_vmf(kappa)? - target).abs() / target;
    if rel > 1e-12 {
        return Err(Error::Numeric(format!(
            "kappa bisection for p = {p} stalled at relative error {rel:e}"
        )));
    }
    Ok(kappa)
}

/// Per-component Gaussian width `κ^{-1/2}`.
pub fn sigma_from_kappa(kappa: f64) -> Result<f64> {
    check_kappa(kappa)?;
    Ok(kappa.powf(-0.5))
}

/// `None` is the identity (probability `1 − p`); each axis has `p/3`.
pub fn sample_pauli<R: Rng + ?Sized>(p: f64, rng: &mut R) -> Result<Option<PauliAxis>> {
    check_probability(p, "pauli rate")?;
    let u = rng.random::<f64>();
    if u >= p {
        return Ok(None);
    }
    let axis = ((3.0 * u / p) as usize).min(2);
    Ok(Some(PauliAxis::ALL[axis]))
}

/// One point of the entropy-matched axes: a Pauli rate, the vMF
/// concentration and Gaussian width with the same readout entropy.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChannelMatch {
    pub p: f64,
    pub p_bf: f64,
    pub kappa: f64,
    pub sigma: f64,
    pub entropy: f64,
}

impl ChannelMatch {
    /// Match a Pauli rate. The endpoints are handled as limits: `p = 0` is
    /// noiseless (`κ = ∞`, `σ = 0`); `p = 3/4` is fully mixed (`κ = 0`,
    /// `σ = ∞`, one bit of entropy).
    pub fn from_pauli_rate(p: f64) -> Result<Self> {
        let p_bf = pbf_pauli(p)?;
        let entropy = binary_entropy(p_bf.min(1.0))?;
        if p == 0.0 {
            return Ok(ChannelMatch { p, p_bf, kappa: f64::INFINITY, sigma: 0.0, entropy });
        }
        if p == 0.75 {
            return Ok(ChannelMatch { p, p_bf, kappa: 0.0, sigma: f64::INFINITY, entropy });
        }
        if p > 0.75 {
            return Err(domain(format!(
                "pauli rate {p} flips more than half the readouts; no vMF match"
            )));
        }
        let kappa = match_kappa(p)?;
        Ok(ChannelMatch { p, p_bf, kappa, sigma: sigma_from_kappa(kappa)?, entropy })
    }

    /// Match a Gaussian width, reporting the Pauli rate of equal entropy.
    pub fn from_sigma(sigma: f64) -> Result<Self> {
        if sigma.is_nan() || sigma < 0.0 {
            return Err(domain(format!("sigma must be >= 0, got {sigma}")));
        }
        if sigma == 0.0 {
            return Ok(ChannelMatch { p: 0.0, p_bf: 0.0, kappa: f64::INFINITY, sigma, entropy: 0.0 });
        }
        let kappa = sigma.powi(-2);
        let p_bf = pbf_vmf(kappa)?;
        Ok(ChannelMatch { p: 1.5 * p_bf, p_bf, kappa, sigma, entropy: binary_entropy(p_bf)? })
    }
}
