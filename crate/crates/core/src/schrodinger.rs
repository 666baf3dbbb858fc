//! Momentum-basis ("matrix method") Hamiltonians for a particle on the unit
//! ring `w ∈ [0, 1)`.
//!
//! Mode `n` is the plane wave `⟨w|n⟩ = e^{2πinw}`. With `N` qubits the modes
//! `n ∈ [−2^{N−1}, 2^{N−1} − 1]` sit at basis index `n + 2^{N−1}`, which keeps
//! the map to basis states a bijection. The symmetric top mode `+2^{N−1}` is
//! dropped.
//!
//! The Hamiltonian is `H_{nℓ} = 4π²n²/(2m) δ_{nℓ} + Ṽ(n − ℓ)` with
//! `Ṽ(k) = ∫₀¹ V(w) e^{−2πikw} dw`.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;
use crate::varpoly::VarPolynomial;

/// Largest register for dense assembly.
pub const DENSE_CAP: usize = 12;
/// Points in emitted position densities.
pub const DENSITY_GRID: usize = 512;

const QUAD_TOL: f64 = 1e-10;
const QUAD_DEPTH: u32 = 30;

/// The quartic test polynomial without its overall scale.
pub const QUARTIC_COEFFS: [f64; 5] = [0.372573, -5.0, 22.0, -35.0, 18.0];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PotentialSpec {
    /// `1 + cos(4πw)`.
    Cosine,
    /// `λ(18w⁴ − 35w³ + 22w² − 5w + 0.372573)`.
    Quartic { lambda: f64 },
    /// `1 + cos(4πw) + εw`.
    TiltedCosine { epsilon: f64 },
    /// A polynomial in a single variable, evaluated on `[0, 1]`.
    Polynomial { polynomial: VarPolynomial },
    /// Samples on a uniform grid over `[0, 1]` (both ends included),
    /// linearly interpolated.
    Tabulated { samples: Vec<f64> },
}

impl PotentialSpec {
    /// Power-series coefficients (index = power) for the polynomial-like
    /// variants; `None` for the trigonometric and tabulated ones.
    fn power_coefficients(&self) -> Result<Option<Vec<f64>>> {
        match self {
            PotentialSpec::Quartic { lambda } => {
                Ok(Some(QUARTIC_COEFFS.iter().map(|c| c * lambda).collect()))
            }
            PotentialSpec::Polynomial { polynomial } => {
                let vars = polynomial.variables();
                if vars.len() > 1 {
                    return Err(Error::Invalid(format!(
                        "potential polynomial must have one variable, found {vars:?}"
                    )));
                }
                let mut coeffs = vec![0.0; polynomial.degree() as usize + 1];
                for m in polynomial.monomials() {
                    coeffs[m.degree() as usize] += m.coefficient;
                }
                Ok(Some(coeffs))
            }
            _ => Ok(None),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            PotentialSpec::Tabulated { samples } if samples.len() < 2 => {
                Err(Error::Invalid("tabulated potential needs at least two samples".into()))
            }
            PotentialSpec::Tabulated { samples } if samples.iter().any(|v| !v.is_finite()) => {
                Err(Error::NonFinite("tabulated potential sample".into()))
            }
            _ => self.power_coefficients().map(|_| ()),
        }
    }

    /// `V(w)` for `w ∈ [0, 1]`.
    pub fn value(&self, w: f64) -> f64 {
        match self {
            PotentialSpec::Cosine => 1.0 + (4.0 * PI * w).cos(),
            PotentialSpec::TiltedCosine { epsilon } => 1.0 + (4.0 * PI * w).cos() + epsilon * w,
            PotentialSpec::Tabulated { samples } => {
                let last = samples.len() - 1;
                let x = w.clamp(0.0, 1.0) * last as f64;
                let i = (x.floor() as usize).min(last - 1);
                let f = x - i as f64;
                samples[i] * (1.0 - f) + samples[i + 1] * f
            }
            _ => {
                let c = self.power_coefficients().ok().flatten().unwrap_or_default();
                c.iter().rev().fold(0.0, |acc, &a| acc * w + a)
            }
        }
    }

    /// `Ṽ(k) = ∫₀¹ V(w) e^{−2πikw} dw`.
    pub fn fourier_coefficient(&self, k: i64) -> Result<Complex64> {
        let c = |re: f64| Complex64::new(re, 0.0);
        match self {
            PotentialSpec::Cosine => Ok(c(cosine_coefficient(k))),
            PotentialSpec::TiltedCosine { epsilon } => {
                Ok(c(cosine_coefficient(k)) + monomial_integral(1, k) * epsilon)
            }
            PotentialSpec::Tabulated { .. } => {
                self.validate()?;
                Ok(quadrature_coefficient(|w| self.value(w), k))
            }
            _ => {
                let coeffs = self.power_coefficients()?.expect("polynomial variant");
                let ints = monomial_integrals(coeffs.len().saturating_sub(1), k);
                Ok(coeffs.iter().zip(&ints).map(|(a, i)| i * a).sum())
            }
        }
    }
}

fn cosine_coefficient(k: i64) -> f64 {
    match k {
        0 => 1.0,
        2 | -2 => 0.5,
        _ => 0.0,
    }
}

/// `I_p(k) = ∫₀¹ w^p e^{−2πikw} dw` for `p = 0..=max_power`.
///
/// For `k ≠ 0`, integration by parts gives `I_p = −1/α + (p/α) I_{p−1}`
/// with `α = 2πik` and `I_0 = 0`.
pub fn monomial_integrals(max_power: usize, k: i64) -> Vec<Complex64> {
    if k == 0 {
        return (0..=max_power).map(|p| Complex64::new(1.0 / (p as f64 + 1.0), 0.0)).collect();
    }
    let alpha = Complex64::new(0.0, 2.0 * PI * k as f64);
    let mut out = Vec::with_capacity(max_power + 1);
    out.push(Complex64::new(0.0, 0.0));
    for p in 1..=max_power {
        let prev = out[p - 1];
        out.push((-1.0 + p as f64 * prev) / alpha);
    }
    out
}

fn monomial_integral(p: usize, k: i64) -> Complex64 {
    monomial_integrals(p, k)[p]
}

fn quadrature_coefficient(v: impl Fn(f64) -> f64, k: i64) -> Complex64 {
    let omega = 2.0 * PI * k as f64;
    // Split [0, 1] into one panel per oscillation so the adaptive rule starts
    // from a resolved mesh.
    let panels = (k.unsigned_abs() as usize).max(1) * 4;
    let mut re = 0.0;
    let mut im = 0.0;
    for j in 0..panels {
        let a = j as f64 / panels as f64;
        let b = (j + 1) as f64 / panels as f64;
        let tol = QUAD_TOL / panels as f64;
        re += adaptive_simpson(&|w| v(w) * (omega * w).cos(), a, b, tol);
        im -= adaptive_simpson(&|w| v(w) * (omega * w).sin(), a, b, tol);
    }
    Complex64::new(re, im)
}

/// Adaptive Simpson quadrature with absolute tolerance `tol`.
pub fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn simpson(fa: f64, fm: f64, fb: f64, a: f64, b: f64) -> f64 {
        (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    }
    #[allow(clippy::too_many_arguments)]
    fn recurse(
        f: &dyn Fn(f64) -> f64,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = f(lm);
        let frm = f(rm);
        let left = simpson(fa, flm, fm, a, m);
        let right = simpson(fm, frm, fb, m, b);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            return left + right + delta / 15.0;
        }
        recurse(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
            + recurse(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
    }
    let fa = f(a);
    let fb = f(b);
    let fm = f(0.5 * (a + b));
    recurse(f, a, b, fa, fm, fb, simpson(fa, fm, fb, a, b), tol, QUAD_DEPTH)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MomentumTruncation {
    pub num_qubits: usize,
}

impl MomentumTruncation {
    pub fn new(num_qubits: usize) -> Self {
        MomentumTruncation { num_qubits }
    }

    pub fn dim(&self) -> usize {
        1 << self.num_qubits
    }

    fn half(&self) -> i64 {
        1i64 << (self.num_qubits as u32).saturating_sub(1)
    }

    pub fn modes(&self) -> std::ops::Range<i64> {
        if self.num_qubits == 0 {
            return 0..1;
        }
        -self.half()..self.half()
    }

    pub fn index_of(&self, n: i64) -> Option<usize> {
        self.modes().contains(&n).then(|| (n - self.modes().start) as usize)
    }

    pub fn mode_of(&self, index: usize) -> i64 {
        self.modes().start + index as i64
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SchrodingerProblem {
    pub potential: PotentialSpec,
    pub mass: f64,
    pub truncation: MomentumTruncation,
}

impl SchrodingerProblem {
    pub fn new(potential: PotentialSpec, mass: f64, num_qubits: usize) -> Self {
        SchrodingerProblem {
            potential,
            mass,
            truncation: MomentumTruncation::new(num_qubits),
        }
    }

    /// Kinetic diagonal `4π²n²/(2m)` for mode `n`.
    pub fn kinetic(&self, n: i64) -> f64 {
        4.0 * PI * PI * (n * n) as f64 / (2.0 * self.mass)
    }

    /// Dense `H_{nℓ}`.
    pub fn build_hamiltonian(&self) -> Result<DMatrix<Complex64>> {
        let t = self.truncation;
        if t.num_qubits > DENSE_CAP {
            return Err(Error::RegisterTooLarge {
                what: "matrix-method Hamiltonian",
                requested: t.num_qubits,
                cap: DENSE_CAP,
            });
        }
        if !(self.mass > 0.0 && self.mass.is_finite()) {
            return Err(Error::Invalid(format!("mass must be positive, got {}", self.mass)));
        }
        self.potential.validate()?;
        let dim = t.dim();
        // Ṽ(k) for every difference k = n − ℓ.
        let span = dim as i64 - 1;
        let table: Vec<Complex64> = (-span..=span)
            .map(|k| self.potential.fourier_coefficient(k))
            .collect::<Result<_>>()?;
        let mut h = DMatrix::from_fn(dim, dim, |r, c| {
            let k = r as i64 - c as i64;
            table[(k + span) as usize]
        });
        for r in 0..dim {
            h[(r, r)] += self.kinetic(t.mode_of(r));
        }
        // Ṽ(−k) = conj(Ṽ(k)) for real V; enforce exact Hermiticity.
        for r in 0..dim {
            h[(r, r)].im = 0.0;
            for c in r + 1..dim {
                h[(c, r)] = h[(r, c)].conj();
            }
        }
        Ok(h)
    }

    /// Ground-state energy and momentum amplitudes.
    pub fn ground_state(&self) -> Result<(f64, Vec<Complex64>)> {
        ground_state(&self.build_hamiltonian()?)
    }
}

/// Lowest eigenpair of a dense Hermitian matrix, phase fixed so the largest
/// component is real and positive.
pub fn ground_state(h: &DMatrix<Complex64>) -> Result<(f64, Vec<Complex64>)> {
    if !h.is_square() || h.nrows() == 0 {
        return Err(Error::InvalidMatrix("ground state needs a non-empty square matrix".into()));
    }
    if h.nrows() > 1 << DENSE_CAP {
        return Err(Error::RegisterTooLarge {
            what: "dense eigensolve",
            requested: h.nrows().trailing_zeros() as usize,
            cap: DENSE_CAP,
        });
    }
    let (vals, vecs) = linalg::hermitian_eigen(h);
    let mut v: Vec<Complex64> = vecs.column(0).iter().copied().collect();
    fix_phase(&mut v);
    Ok((vals[0], v))
}

pub(crate) fn fix_phase(v: &mut [Complex64]) {
    let pivot = v
        .iter()
        .copied()
        .max_by(|a, b| a.norm_sqr().total_cmp(&b.norm_sqr()))
        .unwrap_or_default();
    if pivot.norm() > 0.0 {
        let phase = pivot.conj() / pivot.norm();
        for a in v.iter_mut() {
            *a *= phase;
        }
    }
}

/// Position density `|ψ(w)|²` on `grid` points `w_j = j/grid`, scaled so the
/// periodic trapezoid integral over `[0, 1]` equals 1.
pub fn momentum_to_position(amplitudes: &[Complex64], grid: usize) -> Result<Vec<(f64, f64)>> {
    let dim = amplitudes.len();
    if dim == 0 || !dim.is_power_of_two() {
        return Err(Error::DimensionMismatch {
            expected: dim.next_power_of_two(),
            got: dim,
        });
    }
    if grid == 0 {
        return Err(Error::Invalid("density grid must have at least one point".into()));
    }
    let t = MomentumTruncation::new(dim.trailing_zeros() as usize);
    let mut out: Vec<(f64, f64)> = (0..grid)
        .map(|j| {
            let w = j as f64 / grid as f64;
            let psi: Complex64 = amplitudes
                .iter()
                .enumerate()
                .map(|(i, &c)| c * Complex64::from_polar(1.0, 2.0 * PI * t.mode_of(i) as f64 * w))
                .sum();
            (w, psi.norm_sqr())
        })
        .collect();
    // On a periodic grid the trapezoid rule is the plain mean.
    let integral: f64 = out.iter().map(|p| p.1).sum::<f64>() / grid as f64;
    if integral > 0.0 {
        for p in &mut out {
            p.1 /= integral;
        }
    }
    Ok(out)
}

/// Exponent `a` of the harmonic ground state `e^{−a(w−c)²}` for curvature
/// `V''(c)` and mass `m`.
pub fn sho_exponent(mass: f64, curvature: f64) -> f64 {
    (mass * curvature).sqrt() / 2.0
}

/// Momentum amplitudes of the periodic Gaussian `ψ ∝ e^{−a(w−c)²}`.
pub fn gaussian_packet(center: f64, exponent: f64, num_qubits: usize) -> Result<Vec<Complex64>> {
    if !(exponent > 0.0) {
        return Err(Error::Invalid(format!("packet exponent must be positive, got {exponent}")));
    }
    // Overlap of the density with its nearest periodic image.
    let overlap = (-exponent / 2.0).exp();
    if overlap > 1e-6 {
        return Err(Error::Invalid(format!(
            "packet too wide for the unit ring (image overlap {overlap:.2e})"
        )));
    }
    let t = MomentumTruncation::new(num_qubits);
    let amps: Vec<Complex64> = (0..t.dim())
        .map(|i| {
            let n = t.mode_of(i) as f64;
            let mag = (PI / exponent).sqrt() * (-PI * PI * n * n / exponent).exp();
            Complex64::from_polar(mag, -2.0 * PI * n * center)
        })
        .collect();
    let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    Ok(amps.into_iter().map(|a| a / norm).collect())
}

/// Density at the grid points, peak height and location.
pub fn density_peak(density: &[(f64, f64)]) -> (f64, f64) {
    density
        .iter()
        .copied()
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .unwrap_or((0.0, 0.0))
}

/// Fraction of density mass with `|w − center| < half_width` (periodic).
pub fn mass_near(density: &[(f64, f64)], center: f64, half_width: f64) -> f64 {
    let total: f64 = density.iter().map(|p| p.1).sum();
    let near: f64 = density
        .iter()
        .filter(|(w, _)| {
            let d = (w - center).rem_euclid(1.0);
            d.min(1.0 - d) < half_width
        })
        .map(|p| p.1)
        .sum();
    near / total
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() < tol
    }

    #[test]
    fn cosine_coefficients() {
        let v = PotentialSpec::Cosine;
        for k in -6..=6 {
            let want = match k {
                0 => 1.0,
                2 | -2 => 0.5,
                _ => 0.0,
            };
            assert_eq!(v.fourier_coefficient(k).unwrap(), Complex64::new(want, 0.0));
        }
    }

    #[test]
    fn tilt_coefficient_closed_form() {
        let eps = 0.02;
        let v = PotentialSpec::TiltedCosine { epsilon: eps };
        for k in [1i64, -1, 3, 5] {
            let got = v.fourier_coefficient(k).unwrap();
            let want = Complex64::new(0.0, eps / (2.0 * PI * k as f64));
            assert!(close(got, want, 1e-15), "k={k}");
        }
        assert!(close(v.fourier_coefficient(0).unwrap(), Complex64::new(1.0 + eps / 2.0, 0.0), 1e-15));
    }

    #[test]
    fn monomial_recurrence_matches_quadrature() {
        for p in 0..=4usize {
            for k in -3i64..=3 {
                let closed = monomial_integrals(p, k)[p];
                let quad = quadrature_coefficient(|w| w.powi(p as i32), k);
                assert!(close(closed, quad, 1e-9), "p={p} k={k} {closed} {quad}");
            }
        }
    }

    #[test]
    fn quartic_mean_value() {
        let v = PotentialSpec::Quartic { lambda: 1.0 };
        let want = 18.0 / 5.0 - 35.0 / 4.0 + 22.0 / 3.0 - 5.0 / 2.0 + 0.372573;
        assert!((v.fourier_coefficient(0).unwrap().re - want).abs() < 1e-14);
        assert!((want - 0.055906).abs() < 1e-5);
    }

    #[test]
    fn tabulated_matches_closed_form() {
        let samples: Vec<f64> = (0..=2000).map(|j| PotentialSpec::Cosine.value(j as f64 / 2000.0)).collect();
        let v = PotentialSpec::Tabulated { samples };
        let c2 = v.fourier_coefficient(2).unwrap();
        assert!((c2.re - 0.5).abs() < 1e-5 && c2.im.abs() < 1e-9);
    }

    #[test]
    fn free_particle_is_diagonal() {
        let p = SchrodingerProblem::new(PotentialSpec::Polynomial { polynomial: VarPolynomial::zero() }, 3.0, 3);
        let h = p.build_hamiltonian().unwrap();
        for r in 0..8 {
            for c in 0..8 {
                let n = r as f64 - 4.0;
                let want = if r == c { 4.0 * PI * PI * n * n / 6.0 } else { 0.0 };
                assert!((h[(r, c)] - Complex64::new(want, 0.0)).norm() < 1e-12);
            }
        }
        let (e, v) = p.ground_state().unwrap();
        assert!(e.abs() < 1e-12);
        assert!((v[4] - Complex64::new(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn cosine_sparsity_pattern() {
        let h = SchrodingerProblem::new(PotentialSpec::Cosine, 10.0, 5).build_hamiltonian().unwrap();
        for r in 0..32usize {
            for c in 0..32usize {
                let d = r.abs_diff(c);
                if d != 0 && d != 2 {
                    assert_eq!(h[(r, c)].norm(), 0.0);
                } else {
                    assert!(h[(r, c)].norm() > 0.0);
                }
            }
        }
    }

    #[test]
    fn constant_shift() {
        let base = SchrodingerProblem::new(PotentialSpec::Cosine, 10.0, 4);
        let shifted = SchrodingerProblem::new(
            PotentialSpec::Polynomial { polynomial: "1 + 2.5".parse().unwrap() },
            10.0,
            4,
        );
        let e_shift = shifted.ground_state().unwrap().0;
        assert!((e_shift - 3.5).abs() < 1e-12);
        let plus: PotentialSpec = PotentialSpec::Tabulated { samples: vec![0.0; 2] };
        assert!(SchrodingerProblem::new(plus, 1.0, 2).ground_state().unwrap().0.abs() < 1e-12);
        assert!(base.ground_state().is_ok());
    }

    #[test]
    fn flat_and_two_mode_densities() {
        let mut c = vec![Complex64::new(0.0, 0.0); 8];
        c[4] = Complex64::new(1.0, 0.0);
        let rho = momentum_to_position(&c, DENSITY_GRID).unwrap();
        assert!(rho.iter().all(|&(_, r)| (r - 1.0).abs() < 1e-12));

        let mut c = vec![Complex64::new(0.0, 0.0); 8];
        c[2] = Complex64::new(1.0, 0.0); // n = −2
        c[6] = Complex64::new(1.0, 0.0); // n = +2
        let rho = momentum_to_position(&c, DENSITY_GRID).unwrap();
        for &(w, r) in &rho {
            let want = 2.0 * (4.0 * PI * w).cos().powi(2);
            assert!((r - want).abs() < 1e-9);
        }
    }

    #[test]
    fn gaussian_packets() {
        let a = sho_exponent(100.0, 4.0 * PI * 4.0);
        assert!((a - (PI * 4.0 * 100.0f64).sqrt()).abs() < 1e-12);
        let amps = gaussian_packet(0.1848, a, 6).unwrap();
        let norm: f64 = amps.iter().map(|x| x.norm_sqr()).sum();
        assert!((norm - 1.0).abs() < 1e-12);
        let rho = momentum_to_position(&amps, DENSITY_GRID).unwrap();
        let (w, _) = density_peak(&rho);
        assert!((w - 0.1848).abs() < 2.0 / DENSITY_GRID as f64);

        let broad = gaussian_packet(0.5, 60.0, 4).unwrap();
        assert!(broad[8].norm() > broad.iter().enumerate().filter(|(i, _)| *i != 8).map(|(_, x)| x.norm()).fold(0.0, f64::max));
        assert!(gaussian_packet(0.5, 20.0, 4).is_err());
    }

    #[test]
    fn cosine_ground_state_is_symmetric() {
        let p = SchrodingerProblem::new(PotentialSpec::Cosine, 100.0, 5);
        let (_, amps) = p.ground_state().unwrap();
        let rho = momentum_to_position(&amps, DENSITY_GRID).unwrap();
        let at = |w: f64| rho[(w * DENSITY_GRID as f64).round() as usize].1;
        assert!((at(0.25) / at(0.75) - 1.0).abs() < 1e-6);
        let (w, _) = density_peak(&rho);
        assert!((w - 0.25).abs() < 0.01 || (w - 0.75).abs() < 0.01);
    }

    #[test]
    fn cosine_zero_point_energy() {
        // Harmonic expansion near a minimum: V ≈ 8π²(w − w₀)², so
        // Ω = √(16π²/m) and E₀ ≈ Ω/2.
        let m = 400.0;
        let e = SchrodingerProblem::new(PotentialSpec::Cosine, m, 6).ground_state().unwrap().0;
        let sho = 0.5 * (16.0 * PI * PI / m).sqrt();
        assert!((e / sho - 1.0).abs() < 0.05, "{e} vs {sho}");
    }

    #[test]
    fn tilt_selects_left_minimum() {
        let p = SchrodingerProblem::new(PotentialSpec::TiltedCosine { epsilon: 0.02 }, 100.0, 5);
        let (_, amps) = p.ground_state().unwrap();
        let rho = momentum_to_position(&amps, DENSITY_GRID).unwrap();
        let (w, _) = density_peak(&rho);
        assert!((w - 0.25).abs() < 0.02);
    }

    #[test]
    fn size_cap() {
        let p = SchrodingerProblem::new(PotentialSpec::Cosine, 1.0, 13);
        assert!(matches!(p.build_hamiltonian(), Err(Error::RegisterTooLarge { .. })));
    }
}
