//! Pointwise Kähler–Ricci algebra: the Ricci form on spinors, its
//! eigenvalue combinatorics, the condition (Ric) splitting, the `η` form and
//! vanishing checks.

use serde::{Deserialize, Serialize};

use crate::error::{check_index, Error, Result};
use crate::scalar::{binomial, Complex, Real};
use crate::spin_module::{Endomorphism, SpinModule, Spinor};

/// Absolute tolerance on `Σρ_k = R/2`.
pub const PROFILE_SUM_TOL: f64 = 1e-9;

/// Ricci eigenvalues `ρ_1 ≥ … ≥ ρ_m` on the `J`-invariant planes plus the scalar curvature.
#[derive(Clone, Debug, PartialEq)]
pub struct RicciProfile<T: Real> {
    rho: Vec<T>,
    scalar_curvature: T,
}

#[derive(Deserialize, Serialize)]
struct ProfileJson {
    #[serde(rename = "R")]
    scalar_curvature: f64,
    rho: Vec<f64>,
}

impl<T: Real> RicciProfile<T> {
    /// Sorts `rho` descending and enforces `Σρ_k = R/2`.
    pub fn new(mut rho: Vec<T>, scalar_curvature: T) -> Result<Self> {
        if rho.is_empty() {
            return Err(Error::Input("empty Ricci profile".into()));
        }
        if rho.iter().any(|x| !x.is_finite()) || !scalar_curvature.is_finite() {
            return Err(Error::Input("non-finite Ricci data".into()));
        }
        let sum = rho.iter().fold(T::zero(), |a, &x| a + x);
        let defect = (sum - scalar_curvature / T::lit(2.0)).abs();
        if defect > T::lit(PROFILE_SUM_TOL) {
            return Err(Error::Input(format!(
                "Ricci eigenvalues sum to {} but R/2 = {}",
                sum.to_f64_lossy(),
                (scalar_curvature / T::lit(2.0)).to_f64_lossy()
            )));
        }
        rho.sort_by(|a, b| b.partial_cmp(a).expect("finite"));
        Ok(Self { rho, scalar_curvature })
    }

    /// `ρ_k = R/(2m)` for all `k`.
    pub fn einstein(m: usize, scalar_curvature: T) -> Result<Self> {
        if m == 0 {
            return Err(Error::Domain("m must be positive".into()));
        }
        Self::new(vec![scalar_curvature / T::of_usize(2 * m); m], scalar_curvature)
    }

    /// Condition (Ric): `ρ_1 = … = ρ_{m-1} = R/(2m-2)`, `ρ_m = 0`.
    pub fn condition_ric(m: usize, scalar_curvature: T) -> Result<Self> {
        if m < 2 {
            return Err(Error::Domain("condition (Ric) needs m ≥ 2".into()));
        }
        let mut rho = vec![scalar_curvature / T::of_usize(2 * m - 2); m - 1];
        rho.push(T::zero());
        Self::new(rho, scalar_curvature)
    }

    pub fn m(&self) -> usize {
        self.rho.len()
    }

    pub fn rho(&self) -> &[T] {
        &self.rho
    }

    pub fn scalar_curvature(&self) -> T {
        self.scalar_curvature
    }

    pub fn is_ricci_flat(&self) -> bool {
        self.rho.iter().all(|x| x.abs() <= T::lit(1e-12))
    }

    /// Whether this is the condition (Ric) profile up to `tol`.
    pub fn is_condition_ric(&self, tol: T) -> bool {
        let m = self.m();
        if m < 2 || self.scalar_curvature <= T::zero() {
            return false;
        }
        let top = self.scalar_curvature / T::of_usize(2 * m - 2);
        self.rho[..m - 1].iter().all(|&x| (x - top).abs() <= tol) && self.rho[m - 1].abs() <= tol
    }

    /// Parses `[{"R": number, "rho": [numbers]}, …]`.
    pub fn parse_list(json: &str) -> Result<Vec<Self>> {
        let raw: Vec<ProfileJson> = serde_json::from_str(json)?;
        raw.into_iter()
            .map(|p| Self::new(p.rho.into_iter().map(T::lit).collect(), T::lit(p.scalar_curvature)))
            .collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "R": self.scalar_curvature.to_f64_lossy(),
            "rho": self.rho.iter().map(|x| x.to_f64_lossy()).collect::<Vec<_>>(),
        })
    }
}

fn check_module<T: Real>(m: usize, sm: &SpinModule<T>) -> Result<()> {
    if sm.m() != m {
        return Err(Error::Shape { expected: sm.m(), got: m });
    }
    Ok(())
}

/// `ρ = Σ ρ_k e_{2k-1} e_{2k}`, acting by `u_ε ↦ i(Σ ε_k ρ_k) u_ε`.
pub fn ricci_endomorphism<T: Real>(profile: &RicciProfile<T>, sm: &SpinModule<T>) -> Result<Endomorphism<T>> {
    check_module(profile.m(), sm)?;
    sm.diagonal_bivector(profile.rho())
}

/// Eigenvalues of `-iρ` on `S_r` with multiplicities, ascending:
/// `R/2 − 2(ρ_{i_1}+…+ρ_{i_r})` over `r`-subsets.
pub fn ricci_eigenvalue_set<T: Real>(profile: &RicciProfile<T>, r: usize) -> Result<Vec<(T, usize)>> {
    let m = profile.m();
    check_index(r, 0, m)?;
    let half = profile.scalar_curvature() / T::lit(2.0);
    let mut values: Vec<T> = (0usize..1 << m)
        .filter(|mask| mask.count_ones() as usize == r)
        .map(|mask| {
            let s = (0..m).filter(|k| mask >> k & 1 == 1).fold(T::zero(), |a, k| a + profile.rho()[k]);
            half - T::lit(2.0) * s
        })
        .collect();
    values.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    let scale = profile.rho().iter().fold(half.abs(), |a, x| a.max(x.abs())).max(T::one());
    let tol = T::lit(1e-12) * scale;
    let mut out: Vec<(T, usize)> = Vec::new();
    for v in values {
        match out.last_mut() {
            Some((w, k)) if (v - *w).abs() <= tol => *k += 1,
            _ => out.push((v, 1)),
        }
    }
    debug_assert_eq!(out.iter().map(|x| x.1).sum::<usize>(), binomial(m, r));
    Ok(out)
}

/// Orthonormal spinors spanning `S_{r,ε}`.
#[derive(Clone, Debug)]
pub struct SubspaceBasis<T: Real> {
    pub r: usize,
    pub epsilon: usize,
    pub vectors: Vec<Spinor<T>>,
}

impl<T: Real> SubspaceBasis<T> {
    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    /// Largest entry of `Gram − Id`.
    pub fn gram_defect(&self) -> T {
        let mut worst = T::zero();
        for (a, u) in self.vectors.iter().enumerate() {
            for (b, v) in self.vectors.iter().enumerate() {
                let target = if a == b { T::one() } else { T::zero() };
                worst = worst.max((u.inner(v) - Complex::new(target, T::zero())).norm_sqr().sqrt());
            }
        }
        worst
    }
}

/// The scalar by which `-iρ` acts on `S_{r,ε}` under condition (Ric):
/// `R/(2m−2) · (m − 1 − 2(r − ε))`.
pub fn splitting_scalar<T: Real>(m: usize, scalar_curvature: T, r: usize, epsilon: usize) -> T {
    let factor = T::of_usize(m - 1) - T::lit(2.0) * (T::of_usize(r) - T::of_usize(epsilon));
    scalar_curvature / T::of_usize(2 * m - 2) * factor
}

/// `S_r = S_{r,0} ⊕ S_{r,1}` under condition (Ric); `S_{r,0}` is spanned by
/// the `u_ε` with `ε_m = +1`.
pub fn ric_splitting<T: Real>(
    m: usize,
    scalar_curvature: T,
    r: usize,
    sm: &SpinModule<T>,
) -> Result<(SubspaceBasis<T>, SubspaceBasis<T>)> {
    check_module(m, sm)?;
    if m < 2 {
        return Err(Error::Domain("the splitting needs m ≥ 2".into()));
    }
    if scalar_curvature <= T::zero() {
        return Err(Error::Domain("condition (Ric) needs R > 0".into()));
    }
    check_index(r, 1, m - 1)?;
    let last = 1usize << (m - 1);
    let indices = sm.sr_indices(r)?;
    let pick = |eps: usize| SubspaceBasis {
        r,
        epsilon: eps,
        vectors: indices
            .iter()
            .filter(|&&i| (i & last != 0) == (eps == 1))
            .map(|&i| sm.basis_spinor(i))
            .collect(),
    };
    Ok((pick(0), pick(1)))
}

/// `η = Ω − ((2m−2)/R) ρ` for the condition (Ric) profile.
pub fn eta_endomorphism<T: Real>(m: usize, scalar_curvature: T, sm: &SpinModule<T>) -> Result<Endomorphism<T>> {
    check_module(m, sm)?;
    if scalar_curvature <= T::zero() {
        return Err(Error::Domain("η needs R > 0".into()));
    }
    let profile = RicciProfile::condition_ric(m, scalar_curvature)?;
    let rho = ricci_endomorphism(&profile, sm)?;
    let factor = T::of_usize(2 * m - 2) / scalar_curvature;
    Ok(sm.kahler_form().sub(&rho.scale(Complex::new(factor, T::zero()))))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Holomorphic,
    Antiholomorphic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Vanishes,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VanishingVerdict {
    pub r: usize,
    pub direction: Direction,
    /// One entry per sampled profile.
    pub condition_met: Vec<bool>,
    /// Partial sums compared against `R/4`, per profile.
    pub partial_sums: Vec<f64>,
    pub quarter_r: Vec<f64>,
    /// True when some sampled profile has nonzero Ricci curvature.
    pub non_ricci_flat: bool,
    pub verdict: Verdict,
}

/// Holomorphic: `ρ_1+…+ρ_r ≤ R/4`. Antiholomorphic: `ρ_{m−r+1}+…+ρ_m ≥ R/4`.
/// Ties (within `1e-12·max(1,|R|)`) count as met.
pub fn condition_holds<T: Real>(profile: &RicciProfile<T>, r: usize, direction: Direction) -> Result<(bool, T)> {
    let m = profile.m();
    check_index(r, 0, m)?;
    let quarter = profile.scalar_curvature() / T::lit(4.0);
    let slack = T::lit(1e-12) * profile.scalar_curvature().abs().max(T::one());
    let rho = profile.rho();
    Ok(match direction {
        Direction::Holomorphic => {
            let s = rho[..r].iter().fold(T::zero(), |a, &x| a + x);
            (s <= quarter + slack, s)
        }
        Direction::Antiholomorphic => {
            let s = rho[m - r..].iter().fold(T::zero(), |a, &x| a + x);
            (s >= quarter - slack, s)
        }
    })
}

pub fn vanishing_check<T: Real>(profiles: &[RicciProfile<T>], r: usize, direction: Direction) -> Result<VanishingVerdict> {
    let first = profiles.first().ok_or_else(|| Error::Input("no profiles supplied".into()))?;
    let m = first.m();
    if let Some(p) = profiles.iter().find(|p| p.m() != m) {
        return Err(Error::Input(format!("profiles mix m = {m} and m = {}", p.m())));
    }
    let mut condition_met = Vec::with_capacity(profiles.len());
    let mut partial_sums = Vec::with_capacity(profiles.len());
    let mut quarter_r = Vec::with_capacity(profiles.len());
    for p in profiles {
        let (met, s) = condition_holds(p, r, direction)?;
        condition_met.push(met);
        partial_sums.push(s.to_f64_lossy());
        quarter_r.push(p.scalar_curvature().to_f64_lossy() / 4.0);
    }
    let non_ricci_flat = profiles.iter().any(|p| !p.is_ricci_flat());
    let verdict = if non_ricci_flat && condition_met.iter().all(|&b| b) {
        Verdict::Vanishes
    } else {
        Verdict::Inconclusive
    };
    Ok(VanishingVerdict { r, direction, condition_met, partial_sums, quarter_r, non_ricci_flat, verdict })
}

/// Range of `r` for which the condition (Ric) profile satisfies the
/// vanishing condition: holomorphic `r ≤ (m−1)/2`, antiholomorphic `r ≥ (m+1)/2`.
pub fn ric_threshold(m: usize, direction: Direction) -> std::ops::RangeInclusive<usize> {
    match direction {
        Direction::Holomorphic => 0..=(m - 1) / 2,
        Direction::Antiholomorphic => (m + 2) / 2..=m,
    }
}

/// Even `m ≥ 4`: holomorphic vanishing for `r ≤ (m−2)/2`.
pub fn even_ric_threshold(m: usize) -> Result<std::ops::RangeInclusive<usize>> {
    if m < 4 || m % 2 == 1 {
        return Err(Error::Domain(format!("even threshold needs even m ≥ 4, got {m}")));
    }
    Ok(0..=(m - 2) / 2)
}

/// One row of the Einstein eigenvalue table.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EinsteinRow<T> {
    pub r: usize,
    pub holomorphic: T,
    pub antiholomorphic: T,
}

/// Admissible `D²` eigenvalues on holomorphic (`rR/2m`) and antiholomorphic
/// (`(m−r)R/2m`) sections of `S_r`, for `r = 0..=m`.
pub fn einstein_eigenvalue_table<T: Real>(m: usize, scalar_curvature: T) -> Vec<EinsteinRow<T>> {
    let denom = T::of_usize(2 * m.max(1));
    (0..=m)
        .map(|r| EinsteinRow {
            r,
            holomorphic: T::of_usize(r) * scalar_curvature / denom,
            antiholomorphic: T::of_usize(m - r) * scalar_curvature / denom,
        })
        .collect()
}

/// Lower bound for `λ_1²`: `m/(m−1)·R0/4` for even `m`, `(m+1)/m·R0/4` for odd `m`.
pub fn limiting_eigenvalue<T: Real>(m: usize, r0: T) -> Result<T> {
    if m == 0 {
        return Err(Error::Domain("m must be positive".into()));
    }
    if r0 <= T::zero() {
        return Err(Error::Domain("R0 must be positive".into()));
    }
    let quarter = r0 / T::lit(4.0);
    Ok(if m % 2 == 0 {
        T::of_usize(m) / T::of_usize(m - 1) * quarter
    } else {
        T::of_usize(m + 1) / T::of_usize(m) * quarter
    })
}
