//! Generic decoding work factors and the combined report.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};

use super::{
    corollary1_lower_bound, expected_candidates, log2_biguint, log2_rational, qpow, remark_upper_bound,
    theorem1_work_factor, ParamSet,
};
use crate::error::Result;

/// Linear algebra constant of the algebraic estimate.
pub const MU: f64 = 2.807;

/// Whether the combinatorial estimates carry the cubic prefactor
/// `P(n, k) = (m(n-k))^3`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PolyFactor {
    Neglected,
    #[default]
    Cubic,
}

/// Selection between the `w` and `w + 1` cases of the algebraic estimate.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AlgCaseRule {
    /// `w` case iff `m·C(n-k-1, w) >= C(n, w)`.
    #[default]
    Reference,
    /// `w` case iff `m·C(n-k-1, w) <= C(n, w)`.
    AsPrinted,
}

fn poly_log2(p: &ParamSet, poly: PolyFactor) -> f64 {
    match poly {
        PolyFactor::Neglected => 0.0,
        PolyFactor::Cubic => 3.0 * ((p.m as f64) * ((p.n - p.k) as f64)).log2(),
    }
}

/// `w⌈(k+1)m/n⌉ - m`.
fn comb_exponent(p: &ParamSet) -> i64 {
    let c = ((p.k as u64 + 1) * p.m as u64).div_ceil(p.n as u64);
    p.w as i64 * c as i64 - p.m as i64
}

/// `log2 P(n,k) q^{w⌈(k+1)m/n⌉ - m}`.
pub fn wf_combinatorial(p: &ParamSet, poly: PolyFactor) -> f64 {
    poly_log2(p, poly) + comb_exponent(p) as f64 * (p.q as f64).log2()
}

/// Square-root speedup on the enumeration exponent.
pub fn wf_pq_combinatorial(p: &ParamSet, poly: PolyFactor) -> f64 {
    poly_log2(p, poly) + 0.5 * comb_exponent(p) as f64 * (p.q as f64).log2()
}

fn binom(a: u32, b: u32) -> BigUint {
    if b > a {
        return BigUint::from(0u32);
    }
    let mut out = BigUint::one();
    for i in 0..b {
        out = out * (a - i) / (i + 1);
    }
    out
}

fn factorial(e: u32) -> BigUint {
    (1..=e).fold(BigUint::one(), |acc, i| acc * i)
}

/// `log2 [((m+n)w)^e / e!]^μ` with `e = w` or `w + 1`.
pub fn wf_algebraic(p: &ParamSet, rule: AlgCaseRule) -> f64 {
    let lhs = binom(p.n - p.k - 1, p.w) * p.m;
    let rhs = binom(p.n, p.w);
    let small_case = match rule {
        AlgCaseRule::Reference => lhs >= rhs,
        AlgCaseRule::AsPrinted => lhs <= rhs,
    };
    let e = if small_case { p.w } else { p.w + 1 };
    let base = BigUint::from((p.m + p.n) as u64 * p.w as u64);
    MU * (log2_biguint(&base.pow(e)) - log2_biguint(&factorial(e)))
}

/// `log2 (n² q^{2mξ} / N)`; defined beyond the unique radius.
pub fn wf_key(p: &ParamSet) -> Result<f64> {
    p.check_beyond_unique()?;
    let n2 = BigRational::from_integer((p.n as u64 * p.n as u64).into());
    let value = n2 * qpow(p.q, p.m as i64 * p.two_xi()) / expected_candidates(p.m, p.n, p.k, p.w, p.q);
    Ok(log2_rational(&value))
}

/// All work factors of one parameter set, as `log2` values. Entries whose
/// formula is undefined for the parameters are `None`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportValues {
    #[serde(rename = "W_RD")]
    pub w_rd: Option<f64>,
    pub delta_star: Option<u32>,
    #[serde(rename = "W_RD_lower")]
    pub w_rd_lower: Option<f64>,
    #[serde(rename = "W_RD_upper")]
    pub w_rd_upper: Option<f64>,
    #[serde(rename = "W_Comb")]
    pub w_comb: f64,
    #[serde(rename = "W_Comb_over_N")]
    pub w_comb_over_n: f64,
    #[serde(rename = "W_PQComb")]
    pub w_pq_comb: f64,
    #[serde(rename = "W_PQComb_over_N")]
    pub w_pq_comb_over_n: f64,
    #[serde(rename = "W_Alg")]
    pub w_alg: f64,
    #[serde(rename = "W_Key")]
    pub w_key: Option<f64>,
    pub success_prob: Option<f64>,
    #[serde(rename = "N")]
    pub n: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WorkFactorReport {
    pub params: ParamSet,
    pub log2: ReportValues,
}

pub fn report(p: &ParamSet) -> Result<WorkFactorReport> {
    report_with(p, PolyFactor::default(), AlgCaseRule::default())
}

pub fn report_with(p: &ParamSet, poly: PolyFactor, rule: AlgCaseRule) -> Result<WorkFactorReport> {
    p.validate()?;
    let log_n = log2_rational(&expected_candidates(p.m, p.n, p.k, p.w, p.q));
    let w_comb = wf_combinatorial(p, poly);
    let w_pq_comb = wf_pq_combinatorial(p, poly);
    let (w_rd, delta_star, w_rd_lower, w_rd_upper, w_key, success_prob) = if p.within_unique_radius() {
        let one_trial = 2.0 * (p.n as f64).log2();
        (Some(one_trial), Some(0), None, None, None, Some(0.0))
    } else if p.w <= p.n - p.k {
        let t = theorem1_work_factor(p)?;
        (
            Some(t.log2()),
            Some(t.delta),
            Some(corollary1_lower_bound(p)?.log2()),
            Some(remark_upper_bound(p)?.log2()),
            Some(wf_key(p)?),
            Some(t.success.log2()),
        )
    } else {
        (None, None, None, None, None, None)
    };
    Ok(WorkFactorReport {
        params: *p,
        log2: ReportValues {
            w_rd,
            delta_star,
            w_rd_lower,
            w_rd_upper,
            w_comb,
            w_comb_over_n: w_comb - log_n,
            w_pq_comb,
            w_pq_comb_over_n: w_pq_comb - log_n,
            w_alg: wf_algebraic(p, rule),
            w_key,
            success_prob,
            n: log_n,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row1() -> ParamSet {
        ParamSet::new(2, 24, 24, 16, 6).unwrap()
    }

    #[test]
    fn combinatorial_row1() {
        let p = row1();
        // w⌈17·24/24⌉ - 24 = 78
        assert_eq!(wf_combinatorial(&p, PolyFactor::Neglected), 78.0);
        assert!((wf_combinatorial(&p, PolyFactor::Cubic) - 100.755).abs() < 1e-3);
        assert_eq!(wf_pq_combinatorial(&p, PolyFactor::Neglected), 39.0);
    }

    #[test]
    fn algebraic_cases() {
        let p = row1();
        assert!((wf_algebraic(&p, AlgCaseRule::Reference) - 126.007).abs() < 1e-3);
        assert!((wf_algebraic(&p, AlgCaseRule::AsPrinted) - 110.95).abs() < 1e-2);
    }

    #[test]
    fn key_row1() {
        assert!((wf_key(&row1()).unwrap() - 43.4006).abs() < 1e-3);
        assert!(wf_key(&ParamSet::new(2, 24, 24, 16, 4).unwrap()).is_err());
    }

    #[test]
    fn degenerate_report_is_one_trial() {
        let p = ParamSet::new(2, 24, 24, 16, 4).unwrap();
        let r = report(&p).unwrap();
        assert_eq!(r.log2.w_rd, Some(2.0 * 24f64.log2()));
        assert_eq!(r.log2.delta_star, Some(0));
        assert_eq!(r.log2.w_key, None);
    }

    #[test]
    fn report_round_trips_through_json() {
        let r = report(&row1()).unwrap();
        let text = serde_json::to_string(&r).unwrap();
        let back: WorkFactorReport = serde_json::from_str(&text).unwrap();
        assert_eq!(back, r);
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        for key in ["W_RD", "delta_star", "W_RD_lower", "W_RD_upper", "W_Comb", "W_Comb_over_N", "W_PQComb", "W_Alg", "W_Key", "success_prob", "N"] {
            assert!(v["log2"].get(key).is_some(), "{key}");
        }
        let params: ParamSet = serde_json::from_value(v["params"].clone()).unwrap();
        assert_eq!(params, row1());
    }
}
