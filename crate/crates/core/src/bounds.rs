//! Closed-form sample-complexity bounds.
//!
//! Values are returned unclamped; anything `≥ 1` is flagged vacuous. Sample
//! counts are `f64` so that `m = ∞` can be evaluated directly.

use crate::error::{Error, Result};

/// `|Θ|` held as its natural logarithm, so factorial-sized families fit.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct ThetaCount {
    ln: f64,
}

impl ThetaCount {
    pub fn from_count(count: u128) -> Result<Self> {
        if count == 0 {
            return Err(Error::Parameter("|Θ| must be positive".into()));
        }
        Ok(Self { ln: (count as f64).ln() })
    }

    /// `|Θ| = k!`, as `Σ_{j ≤ k} ln j`.
    pub fn factorial(k: u64) -> Self {
        Self { ln: (2..=k).map(|j| (j as f64).ln()).sum() }
    }

    pub fn from_ln(ln: f64) -> Result<Self> {
        if !(ln >= 0.0 && ln.is_finite()) {
            return Err(Error::Parameter(format!("ln|Θ| = {ln} must be finite and non-negative")));
        }
        Ok(Self { ln })
    }

    pub fn ln(&self) -> f64 {
        self.ln
    }

    pub fn log2(&self) -> f64 {
        self.ln / std::f64::consts::LN_2
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundValue {
    pub value: f64,
    pub vacuous: bool,
}

impl BoundValue {
    fn new(value: f64) -> Self {
        Self { value, vacuous: value >= 1.0 }
    }
}

fn open_unit(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v < 1.0 {
        Ok(())
    } else {
        Err(Error::Parameter(format!("{name} = {v} outside (0, 1)")))
    }
}

fn agreement(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha <= 1.0 {
        Ok(())
    } else {
        Err(Error::Parameter(format!("α = {alpha} outside (0, 1]")))
    }
}

fn samples(m: f64) -> Result<()> {
    if m > 0.0 && !m.is_nan() {
        Ok(())
    } else {
        Err(Error::Parameter(format!("m = {m} must be positive")))
    }
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::Parameter(format!("{name} = {v} must be positive and finite")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KgBoundParams {
    pub m: f64,
    pub n: u64,
    pub r: u64,
    pub p: f64,
    pub alpha: f64,
    pub delta: f64,
}

/// `max(64/(α²pq²r²)·L, (2/(αq))·√((2/m)·L))` with `L = ln(6nʳ/δ)`.
pub fn kg_bound(params: &KgBoundParams) -> Result<BoundValue> {
    let KgBoundParams { m, n, r, p, alpha, delta } = *params;
    samples(m)?;
    open_unit("p", p)?;
    agreement(alpha)?;
    open_unit("δ", delta)?;
    if r == 0 || n == 0 {
        return Err(Error::Parameter("n and r must be positive".into()));
    }
    let q = 1.0 - p;
    let (r_f, n_f) = (r as f64, n as f64);
    let log_term = 6f64.ln() + r_f * n_f.ln() - delta.ln();
    let first = 64.0 / (alpha * alpha * p * q * q * r_f * r_f) * log_term;
    let second = 2.0 / (alpha * q) * (2.0 / m * log_term).sqrt();
    Ok(BoundValue::new(first.max(second)))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CnBoundParams {
    pub m: f64,
    pub t_size: f64,
    pub theta: ThetaCount,
    pub alpha: f64,
    pub delta: f64,
    /// Use `8/((1-α)|T|)` in place of `16/|T|`.
    pub proof_form: bool,
}

/// `(6/α)·max(1/m, 16/|T|)·ln(6|Θ|/δ)`.
pub fn cn_bound(params: &CnBoundParams) -> Result<BoundValue> {
    let CnBoundParams { m, t_size, theta, alpha, delta, proof_form } = *params;
    samples(m)?;
    positive("|T|", t_size)?;
    open_unit("δ", delta)?;
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::Parameter(format!("α = {alpha} outside (0, 1)")));
    }
    let floor = if proof_form { 8.0 / ((1.0 - alpha) * t_size) } else { 16.0 / t_size };
    let log_term = 6f64.ln() + theta.ln() - delta.ln();
    Ok(BoundValue::new(6.0 / alpha * (1.0 / m).max(floor) * log_term))
}

/// Default constant of the lower bound: `10⁵ · 256·10⁵`.
pub const DEFAULT_LOWER_BOUND_CONSTANT: f64 = 1e5 * 256e5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CnLowerBoundParams {
    pub m: f64,
    pub t_size: f64,
    pub theta: ThetaCount,
    pub alpha: f64,
    pub c2: f64,
}

/// `log₂|Θ| / (c₂·α·min(m, |T|))`, defined when `0 < log₂|Θ| ≤ α·min(m, |T|)`.
pub fn cn_lower_bound(params: &CnLowerBoundParams) -> Result<BoundValue> {
    let CnLowerBoundParams { m, t_size, theta, alpha, c2 } = *params;
    samples(m)?;
    positive("|T|", t_size)?;
    positive("c₂", c2)?;
    if !(alpha > 0.0 && alpha <= 0.5) {
        return Err(Error::Parameter(format!("α = {alpha} outside (0, 1/2]")));
    }
    let log_theta = theta.log2();
    let cap = alpha * m.min(t_size);
    if log_theta <= 0.0 {
        return Err(Error::Admissibility("log₂|Θ| > 0 fails: |Θ| = 1".into()));
    }
    if log_theta > cap {
        return Err(Error::Admissibility(format!("log₂|Θ| <= α·min(m, |T|) fails: {log_theta} > {cap}")));
    }
    Ok(BoundValue::new(log_theta / (c2 * cap)))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RtBoundParams {
    pub m: f64,
    pub a: u64,
    pub depth: u64,
    pub theta: ThetaCount,
    pub delta: f64,
}

/// `16·max(1/m, 4/aⁿ)·ln(6|Θ|/δ)`.
pub fn rt_bound(params: &RtBoundParams) -> Result<BoundValue> {
    let RtBoundParams { m, a, depth, theta, delta } = *params;
    samples(m)?;
    open_unit("δ", delta)?;
    if a == 0 || depth == 0 {
        return Err(Error::Parameter("a and n must be positive".into()));
    }
    let leaves = (a as f64).powf(depth as f64);
    let log_term = 6f64.ln() + theta.ln() - delta.ln();
    Ok(BoundValue::new(16.0 * (1.0 / m).max(4.0 / leaves) * log_term))
}

/// `(1/m)·ln(|Θ|/δ)`.
pub fn gamma_threshold(m: f64, theta: ThetaCount, delta: f64) -> Result<f64> {
    samples(m)?;
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(Error::Parameter(format!("δ = {delta} outside (0, 1]")));
    }
    Ok((theta.ln() - delta.ln()) / m)
}

/// Realizable: `(1/m)·ln(|Θ|/δ)`. Otherwise `L⋆ + √((1/m)·ln(|Θ|/δ))`.
pub fn occam_bound(m: f64, theta: ThetaCount, delta: f64, realizable: bool, empirical_loss: f64) -> Result<BoundValue> {
    let base = gamma_threshold(m, theta, delta)?;
    if realizable {
        return Ok(BoundValue::new(base));
    }
    if !(0.0..=1.0).contains(&empirical_loss) {
        return Err(Error::Parameter(format!("loss {empirical_loss} outside [0, 1]")));
    }
    Ok(BoundValue::new(empirical_loss + base.sqrt()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn kg(m: f64, alpha: f64) -> KgBoundParams {
        KgBoundParams { m, n: 10, r: 9, p: 0.5, alpha, delta: 0.01 }
    }

    fn cn(m: f64, alpha: f64) -> CnBoundParams {
        CnBoundParams {
            m,
            t_size: 1e5,
            theta: ThetaCount::from_count(100_000).unwrap(),
            alpha,
            delta: 0.01,
            proof_form: false,
        }
    }

    #[test]
    fn kg_limits_and_scaling() {
        let inf = kg_bound(&kg(f64::INFINITY, 1.0)).unwrap().value;
        let first = 64.0 / (0.5 * 0.25 * 81.0) * (6f64.ln() + 9.0 * 10f64.ln() - 0.01f64.ln());
        assert!((inf - first).abs() <= 1e-12 * first);
        let half = kg_bound(&kg(f64::INFINITY, 0.5)).unwrap().value;
        assert!((half / inf - 4.0).abs() < 1e-12);
        assert!(kg_bound(&kg(1e6, 1.0)).unwrap().vacuous);
    }

    #[test]
    fn log_space_matches_direct_evaluation() {
        for n in 1..=6u64 {
            for r in 1..=n {
                for delta in [0.5, 0.1, 0.01] {
                    let direct = (6.0 * (n as f64).powi(r as i32) / delta).ln();
                    let logspace = 6f64.ln() + r as f64 * (n as f64).ln() - f64::ln(delta);
                    assert!((direct - logspace).abs() <= 1e-12 * direct.abs().max(1.0));
                }
            }
        }
    }

    #[test]
    fn cn_branches() {
        // m ≤ |T|/16: the 1/m branch is active.
        let a = cn_bound(&cn(100.0, 0.5)).unwrap().value;
        assert!((a - 6.0 / 0.5 / 100.0 * (6e5f64 / 0.01).ln()).abs() < 1e-12);
        let halved = cn_bound(&cn(100.0, 0.25)).unwrap().value;
        assert!((halved / a - 2.0).abs() < 1e-12);
        let mut proof = cn(1e9, 0.5);
        proof.proof_form = true;
        let p = cn_bound(&proof).unwrap().value;
        assert!((p - 12.0 * 8.0 / (0.5 * 1e5) * (6e5f64 / 0.01).ln()).abs() < 1e-12);
    }

    #[test]
    fn lower_bound_scaling_and_admissibility() {
        let lb = |m: f64| CnLowerBoundParams {
            m,
            t_size: 1e4,
            theta: ThetaCount::from_count(1 << 10).unwrap(),
            alpha: 0.5,
            c2: DEFAULT_LOWER_BOUND_CONSTANT,
        };
        let a = cn_lower_bound(&lb(100.0)).unwrap().value;
        let b = cn_lower_bound(&lb(200.0)).unwrap().value;
        assert!((a / b - 2.0).abs() < 1e-12);
        assert_eq!(cn_lower_bound(&lb(1e4)).unwrap(), cn_lower_bound(&lb(1e6)).unwrap());
        assert!(matches!(cn_lower_bound(&lb(10.0)), Err(Error::Admissibility(_))));
    }

    #[test]
    fn rt_limits() {
        let theta = ThetaCount::factorial(8);
        let p = |m: f64, a: u64| RtBoundParams { m, a, depth: 4, theta, delta: 0.05 };
        let inf = rt_bound(&p(f64::INFINITY, 3)).unwrap().value;
        assert!((inf - 64.0 / 81.0 * (6.0 * 40320.0 / 0.05f64).ln()).abs() < 1e-12);
        let flat = rt_bound(&p(1e9, 1)).unwrap();
        assert!(flat.vacuous);
    }

    #[test]
    fn gamma_and_occam() {
        let one = ThetaCount::from_count(1).unwrap();
        assert_eq!(gamma_threshold(10.0, one, 1.0).unwrap(), 0.0);
        let t = ThetaCount::from_count(5040).unwrap();
        let g1 = gamma_threshold(100.0, t, 0.1).unwrap();
        let g2 = gamma_threshold(200.0, t, 0.1).unwrap();
        assert!((g1 / g2 - 2.0).abs() < 1e-12);
        assert!(matches!(gamma_threshold(0.0, t, 0.1), Err(Error::Parameter(_))));
        assert_eq!(occam_bound(f64::INFINITY, t, 0.1, true, 0.0).unwrap().value, 0.0);
        let real = occam_bound(1000.0, t, 0.05, true, 0.0).unwrap().value;
        let agn = occam_bound(1000.0, t, 0.05, false, 0.0).unwrap().value;
        assert!(agn > real);
    }

    #[test]
    fn factorial_counts() {
        assert!((ThetaCount::factorial(7).ln() - 5040f64.ln()).abs() < 1e-12);
        assert_eq!(ThetaCount::factorial(1).ln(), 0.0);
        assert!(ThetaCount::from_count(0).is_err());
        assert!(ThetaCount::from_ln(-1.0).is_err());
    }

    proptest! {
        #[test]
        fn monotone_in_m_and_delta(
            m1 in 1.0f64..1e7, m2 in 1.0f64..1e7,
            d1 in 0.001f64..0.99, d2 in 0.001f64..0.99,
            alpha in 0.05f64..0.5,
        ) {
            let (mlo, mhi) = if m1 <= m2 { (m1, m2) } else { (m2, m1) };
            let (dlo, dhi) = if d1 <= d2 { (d1, d2) } else { (d2, d1) };
            let theta = ThetaCount::from_count(100_000).unwrap();
            let kgp = |m, delta| KgBoundParams { m, n: 10, r: 9, p: 0.5, alpha, delta };
            prop_assert!(kg_bound(&kgp(mhi, dlo)).unwrap().value <= kg_bound(&kgp(mlo, dlo)).unwrap().value);
            prop_assert!(kg_bound(&kgp(mlo, dhi)).unwrap().value <= kg_bound(&kgp(mlo, dlo)).unwrap().value);
            let cnp = |m, delta| CnBoundParams { m, t_size: 1e5, theta, alpha, delta, proof_form: false };
            prop_assert!(cn_bound(&cnp(mhi, dlo)).unwrap().value <= cn_bound(&cnp(mlo, dlo)).unwrap().value);
            prop_assert!(cn_bound(&cnp(mlo, dhi)).unwrap().value <= cn_bound(&cnp(mlo, dlo)).unwrap().value);
            let rtp = |m, delta| RtBoundParams { m, a: 3, depth: 5, theta, delta };
            prop_assert!(rt_bound(&rtp(mhi, dlo)).unwrap().value <= rt_bound(&rtp(mlo, dlo)).unwrap().value);
            prop_assert!(rt_bound(&rtp(mlo, dhi)).unwrap().value <= rt_bound(&rtp(mlo, dlo)).unwrap().value);
            prop_assert!(gamma_threshold(mhi, theta, dlo).unwrap() <= gamma_threshold(mlo, theta, dlo).unwrap());
            prop_assert!(occam_bound(mhi, theta, dlo, false, 0.1).unwrap().value <= occam_bound(mlo, theta, dlo, false, 0.1).unwrap().value);
        }

        #[test]
        fn upper_bound_dominates_lower(
            m in 1.0f64..1e6, t in 1.0f64..1e6, log2_theta in 1u32..40, alpha in 0.01f64..0.5, delta in 0.001f64..0.99,
        ) {
            let theta = ThetaCount::from_count(1u128 << log2_theta).unwrap();
            let lower = cn_lower_bound(&CnLowerBoundParams { m, t_size: t, theta, alpha, c2: DEFAULT_LOWER_BOUND_CONSTANT });
            prop_assume!(lower.is_ok());
            let upper = cn_bound(&CnBoundParams { m, t_size: t, theta, alpha, delta, proof_form: false }).unwrap();
            prop_assert!(upper.value >= lower.unwrap().value);
        }
    }
}
