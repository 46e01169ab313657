use std::cmp::Ordering;

use crate::{Error, Result};

/// Kendall's τ-b between two score vectors over the same items.
///
/// `τ_b = (C − D) / √((C + D + T_y)(C + D + T_x))`, where `T_x` counts pairs
/// tied only in `x` and `T_y` pairs tied only in `y`. Undefined (an error)
/// when either vector is constant.
pub fn kendall_tau(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::InvalidParameter(format!(
            "rankings cover {} and {} items",
            x.len(),
            y.len()
        )));
    }
    if x.len() < 2 {
        return Err(Error::InsufficientData("Kendall's tau needs at least 2 items".into()));
    }
    let (mut concordant, mut discordant, mut x_only, mut y_only) = (0u64, 0u64, 0u64, 0u64);
    for i in 0..x.len() {
        for j in i + 1..x.len() {
            match (x[i].total_cmp(&x[j]), y[i].total_cmp(&y[j])) {
                (Ordering::Equal, Ordering::Equal) => {}
                (Ordering::Equal, _) => x_only += 1,
                (_, Ordering::Equal) => y_only += 1,
                (a, b) if a == b => concordant += 1,
                _ => discordant += 1,
            }
        }
    }
    let strict = (concordant + discordant) as f64;
    let denom = ((strict + y_only as f64) * (strict + x_only as f64)).sqrt();
    if denom == 0.0 {
        return Err(Error::Undefined("Kendall's tau of a fully tied ranking".into()));
    }
    Ok((concordant as f64 - discordant as f64) / denom)
}

/// τ-b between two rankings given as best-first tie groups of names.
pub fn kendall_rankings(a: &[Vec<String>], b: &[Vec<String>]) -> Result<f64> {
    let position = |r: &[Vec<String>]| {
        let mut items: Vec<(String, f64)> = r
            .iter()
            .enumerate()
            .flat_map(|(g, group)| group.iter().map(move |s| (s.clone(), -(g as f64))))
            .collect();
        items.sort_by(|p, q| p.0.cmp(&q.0));
        items
    };
    let (pa, pb) = (position(a), position(b));
    if pa.len() != pb.len() || pa.iter().zip(&pb).any(|(p, q)| p.0 != q.0) {
        return Err(Error::InvalidParameter("rankings cover different items".into()));
    }
    let xs: Vec<f64> = pa.iter().map(|p| p.1).collect();
    let ys: Vec<f64> = pb.iter().map(|p| p.1).collect();
    kendall_tau(&xs, &ys)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_values() {
        let x = [1.0, 2.0, 3.0, 4.0, 5.0];
        assert_eq!(kendall_tau(&x, &x).unwrap(), 1.0);
        let rev: Vec<f64> = x.iter().rev().copied().collect();
        assert_eq!(kendall_tau(&x, &rev).unwrap(), -1.0);
        let swapped = kendall_tau(&[1.0, 2.0, 3.0, 4.0], &[1.0, 3.0, 2.0, 4.0]).unwrap();
        assert!((swapped - 4.0 / 6.0).abs() < 1e-15);
        assert!(kendall_tau(&[1.0], &[1.0]).is_err());
        assert!(kendall_tau(&[1.0, 1.0], &[1.0, 2.0]).is_err());
    }

    #[test]
    fn tie_groups() {
        let a = vec![vec!["B".to_string()], vec!["S".into(), "V".into()]];
        let b = vec![vec!["V".to_string()], vec!["B".into()], vec!["S".into()]];
        // Pairs: (B,S) concordant, (B,V) discordant, (S,V) tied in a only.
        let tau = kendall_rankings(&a, &b).unwrap();
        assert!((tau - 0.0).abs() < 1e-15);
        assert!(kendall_rankings(&a, &[vec!["B".into()]]).is_err());
    }
}
