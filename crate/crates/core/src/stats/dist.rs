//! Distribution kernels used by the significance tests.
//!
//! `erfc` comes from `libm`, the incomplete beta and gamma functions and the
//! inverse `erfc` from `statrs::function`; this module fixes the
//! parameterizations and argument checks the tests rely on.

use statrs::function::{beta::beta_reg, erf, gamma::gamma_ur};

use crate::{Error, Result};

const SQRT_2: f64 = std::f64::consts::SQRT_2;

/// Standard normal CDF.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x / SQRT_2)
}

/// Standard normal upper tail, `1 - normal_cdf(x)` without cancellation.
pub fn normal_sf(x: f64) -> f64 {
    0.5 * libm::erfc(x / SQRT_2)
}

pub fn normal_pdf(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt()
}

/// Standard normal quantile.
pub fn normal_quantile(p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!(
            "probability must lie in [0, 1], got {p}"
        )));
    }
    Ok(-SQRT_2 * erf::erfc_inv(2.0 * p))
}

fn check_df(df: f64) -> Result<()> {
    if df.is_finite() && df > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "degrees of freedom must be positive and finite, got {df}"
        )))
    }
}

/// Student t CDF with `df` degrees of freedom.
pub fn t_cdf(x: f64, df: f64) -> Result<f64> {
    check_df(df)?;
    if x.is_nan() {
        return Err(Error::InvalidParameter("t_cdf of NaN".into()));
    }
    if x.is_infinite() {
        return Ok(if x > 0.0 { 1.0 } else { 0.0 });
    }
    let tail = 0.5 * beta_reg(0.5 * df, 0.5, df / (df + x * x));
    Ok(if x <= 0.0 { tail } else { 1.0 - tail })
}

/// Student t upper tail.
pub fn t_sf(x: f64, df: f64) -> Result<f64> {
    t_cdf(-x, df)
}

/// Chi-square upper tail with `df` degrees of freedom.
pub fn chi2_sf(x: f64, df: f64) -> Result<f64> {
    check_df(df)?;
    if x.is_nan() {
        return Err(Error::InvalidParameter("chi2_sf of NaN".into()));
    }
    if x <= 0.0 {
        return Ok(1.0);
    }
    if x.is_infinite() {
        return Ok(0.0);
    }
    Ok(gamma_ur(0.5 * df, 0.5 * x))
}

fn check_binom(n: u64, p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!(
            "binomial probability must lie in [0, 1], got {p}"
        )));
    }
    if n > 1 << 40 {
        return Err(Error::InvalidParameter(format!("binomial n too large: {n}")));
    }
    Ok(())
}

/// `ln C(n, i) + i ln p + (n - i) ln q` for i = 0..=n, by recurrence.
fn log_binom_terms(n: u64, p: f64) -> Vec<f64> {
    let (lp, lq) = (p.ln(), (1.0 - p).ln());
    let mut terms = Vec::with_capacity(n as usize + 1);
    let mut log_c = 0.0f64;
    for i in 0..=n {
        if i > 0 {
            log_c += ((n - i + 1) as f64).ln() - (i as f64).ln();
        }
        let t = log_c + mul_log(i, lp) + mul_log(n - i, lq);
        terms.push(t);
    }
    terms
}

// 0 * ln(0) = 0 so that p = 0 or 1 stays exact.
fn mul_log(count: u64, log_p: f64) -> f64 {
    if count == 0 {
        0.0
    } else {
        count as f64 * log_p
    }
}

fn binom_coefficient(n: u64, i: u64) -> f64 {
    let i = i.min(n - i);
    let mut c: u128 = 1;
    for t in 0..i {
        c = c * u128::from(n - t) / u128::from(t + 1);
    }
    c as f64
}

/// Sum of the binomial pmf over `range`.
fn binom_mass(range: std::ops::RangeInclusive<u64>, n: u64, p: f64) -> f64 {
    if range.is_empty() {
        return 0.0;
    }
    if n <= 64 {
        // Exact coefficients; for p = 1/2 every term is a dyadic rational.
        if p == 0.5 {
            let total: f64 = range.map(|i| binom_coefficient(n, i)).sum();
            return total * 0.5f64.powi(n as i32);
        }
        let q = 1.0 - p;
        return range
            .map(|i| binom_coefficient(n, i) * p.powi(i as i32) * q.powi((n - i) as i32))
            .sum::<f64>()
            .min(1.0);
    }
    let terms = log_binom_terms(n, p);
    let slice = &terms[*range.start() as usize..=*range.end() as usize];
    let max = slice.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return 0.0;
    }
    (max + slice.iter().map(|t| (t - max).exp()).sum::<f64>().ln())
        .exp()
        .min(1.0)
}

/// `P(X <= k)` for `X ~ Binomial(n, p)`.
pub fn binom_cdf(k: u64, n: u64, p: f64) -> Result<f64> {
    check_binom(n, p)?;
    Ok(binom_mass(0..=k.min(n), n, p))
}

/// Upper tail `P(X >= k)` for `X ~ Binomial(n, p)`.
pub fn binom_tail(k: u64, n: u64, p: f64) -> Result<f64> {
    check_binom(n, p)?;
    if k > n {
        return Ok(0.0);
    }
    Ok(binom_mass(k..=n, n, p))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normal_reference_points() {
        assert_eq!(normal_cdf(0.0), 0.5);
        assert!((normal_cdf(1.959964) - 0.975).abs() < 1e-6);
        // scipy.stats.norm.cdf(1.959964)
        assert!((normal_cdf(1.959964) - 0.9750000009035577).abs() < 1e-12);
        assert!((normal_quantile(0.975).unwrap() - 1.959963984540054).abs() < 1e-9);
        assert!(normal_quantile(1.5).is_err());
    }

    #[test]
    fn t_and_chi2_reference_points() {
        // scipy: 2 * t.cdf(-0.25, 4), chi2.sf(6, 1)
        assert!((2.0 * t_cdf(-0.25, 4.0).unwrap() - 0.8149020114591813).abs() < 1e-12);
        assert!((chi2_sf(6.0, 1.0).unwrap() - 0.014305878435429641).abs() < 1e-12);
        assert_eq!(t_cdf(0.0, 7.0).unwrap(), 0.5);
        assert!(t_cdf(1.0, 0.0).is_err());
        assert!(chi2_sf(1.0, -1.0).is_err());
        assert_eq!(chi2_sf(0.0, 3.0).unwrap(), 1.0);
    }

    #[test]
    fn binomial_matches_enumeration() {
        for n in 0..=20u64 {
            for k in 0..=n {
                let below = (0u64..1 << n).filter(|m| u64::from(m.count_ones()) <= k).count();
                let above = (0u64..1 << n).filter(|m| u64::from(m.count_ones()) >= k).count();
                let scale = 2f64.powi(n as i32);
                assert_eq!(binom_cdf(k, n, 0.5).unwrap(), below as f64 / scale);
                assert_eq!(binom_tail(k, n, 0.5).unwrap(), above as f64 / scale);
            }
        }
    }

    #[test]
    fn binomial_large_n_uses_log_space() {
        // Symmetry at p = 1/2 and agreement with a small direct case.
        let n = 1001;
        let lo = binom_cdf(500, n, 0.5).unwrap();
        assert!((lo - 0.5).abs() < 1e-12);
        let a = binom_tail(60, 100, 0.3).unwrap();
        let b = 1.0 - binom_cdf(59, 100, 0.3).unwrap();
        assert!((a - b).abs() < 1e-12);
        assert!(binom_cdf(3, 10, 1.5).is_err());
    }
}
