//! Spectrum reports: clustering, oracle comparison, TSV and JSON output.

use nalgebra::DVector;
use serde_json::{json, Value};

use super::{precision_tol, EXACT_CLUSTER_GAP};
use crate::scalar::{Complex, Real};

/// Eigenvalues (ascending) of one operator with eigenvectors, residuals and
/// an optional oracle.
#[derive(Clone, Debug)]
pub struct SpectrumReport<T: Real> {
    pub label: String,
    pub eigenvalues: Vec<T>,
    pub eigenvectors: Vec<DVector<Complex<T>>>,
    /// `‖Av − λv‖` per eigenpair.
    pub residuals: Vec<T>,
    /// Spectral norm estimate used to scale the residual tolerance.
    pub operator_norm: T,
    pub residual_tolerance: T,
    pub cluster_gap: T,
    /// Oracle eigenvalue per entry of `eigenvalues`.
    pub oracle: Option<Vec<T>>,
}

/// A run of eigenvalues closer than the cluster gap.
#[derive(Clone, Debug, PartialEq)]
pub struct Cluster<T> {
    pub value: T,
    pub multiplicity: usize,
    pub first: usize,
    pub max_residual: T,
    pub oracle: Option<T>,
    pub abs_error: Option<T>,
}

fn fmt<T: Real>(x: T) -> String {
    format!("{:.12e}", x.to_f64_lossy())
}

impl<T: Real> SpectrumReport<T> {
    pub fn new(
        label: &str,
        eigenvalues: Vec<T>,
        eigenvectors: Vec<DVector<Complex<T>>>,
        residuals: Vec<T>,
        operator_norm: T,
    ) -> Self {
        let residual_tolerance = precision_tol::<T>(1e-9) * operator_norm.max(T::one());
        Self {
            label: label.to_string(),
            eigenvalues,
            eigenvectors,
            residuals,
            operator_norm,
            residual_tolerance,
            cluster_gap: T::lit(EXACT_CLUSTER_GAP),
            oracle: None,
        }
    }

    pub fn with_cluster_gap(mut self, gap: T) -> Self {
        self.cluster_gap = gap;
        self
    }

    /// Attaches oracle values; must be aligned with `eigenvalues`.
    pub fn with_oracle(mut self, oracle: Vec<T>) -> Self {
        assert_eq!(oracle.len(), self.eigenvalues.len(), "oracle length");
        self.oracle = Some(oracle);
        self
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn max_residual(&self) -> T {
        self.residuals.iter().fold(T::zero(), |a, &r| a.max(r))
    }

    /// True when every residual is within tolerance.
    pub fn passed(&self) -> bool {
        self.residuals.iter().all(|&r| r <= self.residual_tolerance)
    }

    /// Largest `|λ_i − oracle_i|`, if an oracle is attached.
    pub fn max_oracle_error(&self) -> Option<T> {
        self.oracle.as_ref().map(|o| {
            self.eigenvalues
                .iter()
                .zip(o)
                .fold(T::zero(), |a, (&l, &w)| a.max((l - w).abs()))
        })
    }

    pub fn clusters(&self) -> Vec<Cluster<T>> {
        let mut out: Vec<Cluster<T>> = Vec::new();
        for (i, &lambda) in self.eigenvalues.iter().enumerate() {
            let err = self.oracle.as_ref().map(|o| (lambda - o[i]).abs());
            match out.last_mut() {
                Some(c) if (lambda - self.eigenvalues[i - 1]).abs() <= self.cluster_gap => {
                    let total = T::of_usize(c.multiplicity);
                    c.value = (c.value * total + lambda) / (total + T::one());
                    c.multiplicity += 1;
                    c.max_residual = c.max_residual.max(self.residuals[i]);
                    if let (Some(a), Some(e)) = (c.abs_error.as_mut(), err) {
                        *a = a.max(e);
                    }
                }
                _ => out.push(Cluster {
                    value: lambda,
                    multiplicity: 1,
                    first: i,
                    max_residual: self.residuals[i],
                    oracle: self.oracle.as_ref().map(|o| o[i]),
                    abs_error: err,
                }),
            }
        }
        out
    }

    /// One row per cluster; columns `eigenvalue multiplicity residual oracle abs_error`.
    /// Missing oracle values are written as `NA`.
    pub fn to_tsv(&self) -> String {
        let status = if self.passed() { "pass" } else { "fail" };
        let mut s = format!(
            "# {} status={} residual_tolerance={}\neigenvalue\tmultiplicity\tresidual\toracle\tabs_error\n",
            self.label,
            status,
            fmt(self.residual_tolerance)
        );
        for c in self.clusters() {
            let opt = |x: Option<T>| x.map(fmt).unwrap_or_else(|| "NA".into());
            s.push_str(&format!(
                "{}\t{}\t{}\t{}\t{}\n",
                fmt(c.value),
                c.multiplicity,
                fmt(c.max_residual),
                opt(c.oracle),
                opt(c.abs_error)
            ));
        }
        s
    }

    pub fn to_json(&self) -> Value {
        let f = |x: T| x.to_f64_lossy();
        json!({
            "label": self.label,
            "status": if self.passed() { "pass" } else { "fail" },
            "residual_tolerance": f(self.residual_tolerance),
            "cluster_gap": f(self.cluster_gap),
            "eigenvalues": self.eigenvalues.iter().map(|&x| f(x)).collect::<Vec<_>>(),
            "residuals": self.residuals.iter().map(|&x| f(x)).collect::<Vec<_>>(),
            "oracle": self.oracle.as_ref().map(|o| o.iter().map(|&x| f(x)).collect::<Vec<_>>()),
            "clusters": self.clusters().iter().map(|c| json!({
                "eigenvalue": f(c.value),
                "multiplicity": c.multiplicity,
                "residual": f(c.max_residual),
                "oracle": c.oracle.map(f),
                "abs_error": c.abs_error.map(f),
            })).collect::<Vec<_>>(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn report(values: &[f64]) -> SpectrumReport<f64> {
        let n = values.len();
        SpectrumReport::new("t", values.to_vec(), vec![DVector::zeros(1); n], vec![0.0; n], 1.0)
    }

    #[test]
    fn clustering_respects_gap() {
        let r = report(&[0.0, 1e-8, 1.0, 1.0 + 5e-7, 2.0]);
        let c = r.clusters();
        assert_eq!(c.iter().map(|c| c.multiplicity).collect::<Vec<_>>(), vec![2, 2, 1]);
        assert_eq!(c[1].first, 2);
    }

    #[test]
    fn oracle_errors_and_tsv() {
        let r = report(&[1.0, 1.0, 3.0]).with_oracle(vec![1.0, 1.0, 2.5]);
        assert_eq!(r.max_oracle_error(), Some(0.5));
        let tsv = r.to_tsv();
        let lines: Vec<&str> = tsv.lines().collect();
        assert_eq!(lines[1], "eigenvalue\tmultiplicity\tresidual\toracle\tabs_error");
        assert_eq!(lines.len(), 4);
        assert!(lines[2].split('\t').nth(1) == Some("2"));
        assert!(lines[0].contains("status=pass"));
    }

    #[test]
    fn large_residual_fails() {
        let mut r = report(&[1.0]);
        r.residuals[0] = 1.0;
        assert!(!r.passed());
        assert!(r.to_tsv().contains("status=fail"));
        assert_eq!(r.to_json()["status"], "fail");
    }
}
