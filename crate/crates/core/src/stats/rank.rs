use alloc::vec::Vec;

use super::special::{chi_square_sf, normal_sf};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TestMethod {
    KruskalWallis,
    MannWhitneyU,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TestResult {
    pub statistic: f64,
    pub p_value: f64,
    pub method: TestMethod,
}

/// 1-based average ranks of `values` and the tie-group sizes.
pub fn midranks(values: &[f64]) -> Result<(Vec<f64>, Vec<usize>)> {
    if values.iter().any(|v| v.is_nan()) {
        return Err(Error::InvalidParameter("cannot rank NaN"));
    }
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = alloc::vec![0.0; values.len()];
    let mut ties = Vec::new();
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && values[order[end]] == values[order[start]] {
            end += 1;
        }
        // positions start..end hold ranks start+1..=end
        let rank = (start + 1 + end) as f64 / 2.0;
        for &i in &order[start..end] {
            ranks[i] = rank;
        }
        if end - start > 1 {
            ties.push(end - start);
        }
        start = end;
    }
    Ok((ranks, ties))
}

fn tie_sum(ties: &[usize]) -> f64 {
    ties.iter()
        .map(|&t| {
            let t = t as f64;
            t * t * t - t
        })
        .sum()
}

/// Kruskal-Wallis H test on midranks with tie correction; the p-value comes
/// from the chi-square distribution with `groups - 1` degrees of freedom.
pub fn kruskal_wallis<G: AsRef<[f64]>>(groups: &[G]) -> Result<TestResult> {
    if groups.len() < 2 {
        return Err(Error::InsufficientData(
            "Kruskal-Wallis needs at least two groups",
        ));
    }
    if groups.iter().any(|g| g.as_ref().is_empty()) {
        return Err(Error::InsufficientData(
            "Kruskal-Wallis groups must be nonempty",
        ));
    }
    let pooled: Vec<f64> = groups
        .iter()
        .flat_map(|g| g.as_ref().iter().copied())
        .collect();
    let n = pooled.len() as f64;
    if pooled.len() < 3 {
        return Err(Error::InsufficientData(
            "Kruskal-Wallis needs at least three observations",
        ));
    }
    let (ranks, ties) = midranks(&pooled)?;
    let correction = 1.0 - tie_sum(&ties) / (n * n * n - n);
    let df = (groups.len() - 1) as f64;
    if correction <= 0.0 {
        return Ok(TestResult {
            statistic: 0.0,
            p_value: 1.0,
            method: TestMethod::KruskalWallis,
        });
    }
    let mut offset = 0;
    let mut weighted = 0.0;
    for g in groups {
        let len = g.as_ref().len();
        let r: f64 = ranks[offset..offset + len].iter().sum();
        weighted += r * r / len as f64;
        offset += len;
    }
    let h = ((12.0 / (n * (n + 1.0)) * weighted - 3.0 * (n + 1.0)) / correction).max(0.0);
    Ok(TestResult {
        statistic: h,
        p_value: chi_square_sf(h, df),
        method: TestMethod::KruskalWallis,
    })
}

/// Directional U: number of pairs with `a_i > b_j`, ties counting one half.
pub fn u_statistic(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::InsufficientData(
            "Mann-Whitney samples must be nonempty",
        ));
    }
    let pooled: Vec<f64> = a.iter().chain(b).copied().collect();
    let (ranks, _) = midranks(&pooled)?;
    let na = a.len() as f64;
    let rank_sum: f64 = ranks[..a.len()].iter().sum();
    Ok(rank_sum - na * (na + 1.0) / 2.0)
}

/// Two-sided Mann-Whitney U test. Reports `min(U_a, U_b)` and a p-value from
/// the normal approximation with tie-corrected variance and continuity
/// correction.
pub fn mann_whitney_u(a: &[f64], b: &[f64]) -> Result<TestResult> {
    let u_a = u_statistic(a, b)?;
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let product = na * nb;
    let u = u_a.min(product - u_a);
    let n = na + nb;
    let pooled: Vec<f64> = a.iter().chain(b).copied().collect();
    let (_, ties) = midranks(&pooled)?;
    let variance = product / 12.0 * ((n + 1.0) - tie_sum(&ties) / (n * (n - 1.0)));
    let p_value = if variance > 0.0 {
        let z = ((u_a - product / 2.0).abs() - 0.5).max(0.0) / crate::math::sqrt(variance);
        (2.0 * normal_sf(z)).min(1.0)
    } else {
        1.0
    };
    Ok(TestResult {
        statistic: u,
        p_value,
        method: TestMethod::MannWhitneyU,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn midranks_average_ties() {
        let (r, t) = midranks(&[1.0, 2.0, 2.0, 4.0, 5.0]).unwrap();
        assert_eq!(r, [1.0, 2.5, 2.5, 4.0, 5.0]);
        assert_eq!(t, [2]);
        assert!(midranks(&[f64::NAN]).is_err());
    }

    #[test]
    fn kruskal_wallis_separated_groups() {
        let r = kruskal_wallis(&[
            vec![1.0, 2.0, 3.0],
            vec![4.0, 5.0, 6.0],
            vec![7.0, 8.0, 9.0],
        ])
        .unwrap();
        assert!((r.statistic - 7.2).abs() < 1e-9);
        assert!((r.p_value - libm::exp(-3.6)).abs() < 1e-12);
    }

    #[test]
    fn kruskal_wallis_identical_groups() {
        let g = vec![vec![2.0, 2.0], vec![2.0, 2.0], vec![2.0, 2.0]];
        let r = kruskal_wallis(&g).unwrap();
        assert_eq!((r.statistic, r.p_value), (0.0, 1.0));
        let same = vec![vec![1.0, 2.0, 3.0]; 3];
        let r = kruskal_wallis(&same).unwrap();
        assert!(r.statistic.abs() < 1e-12);
        assert!(r.p_value > 0.999);
    }

    #[test]
    fn kruskal_wallis_preconditions() {
        assert!(kruskal_wallis(&[vec![1.0, 2.0]]).is_err());
        assert!(kruskal_wallis(&[vec![1.0], vec![]]).is_err());
        assert!(kruskal_wallis(&[vec![1.0], vec![2.0]]).is_err());
    }

    #[test]
    fn mann_whitney_examples() {
        let r = mann_whitney_u(&[1.0, 2.0, 3.0], &[4.0, 5.0, 6.0]).unwrap();
        assert_eq!(r.statistic, 0.0);
        let same = [3.0, 1.0, 4.0, 1.0, 5.0];
        assert!(mann_whitney_u(&same, &same).unwrap().p_value >= 0.95);
        // 1 beats nothing, 3 beats 2, 5 beats 2,4, 7 beats 2,4,6
        assert_eq!(
            u_statistic(&[1.0, 3.0, 5.0, 7.0], &[2.0, 4.0, 6.0, 8.0]).unwrap(),
            6.0
        );
        assert_eq!(
            mann_whitney_u(&[1.0, 3.0, 5.0, 7.0], &[2.0, 4.0, 6.0, 8.0])
                .unwrap()
                .statistic,
            6.0
        );
        assert_eq!(mann_whitney_u(&[1.0], &[1.0]).unwrap().p_value, 1.0);
        assert!(mann_whitney_u(&[], &[1.0]).is_err());
    }

    proptest::proptest! {
        #[test]
        fn u_statistics_are_complementary(
            a in proptest::collection::vec(0u8..6, 1..12),
            b in proptest::collection::vec(0u8..6, 1..12),
        ) {
            let a: Vec<f64> = a.into_iter().map(f64::from).collect();
            let b: Vec<f64> = b.into_iter().map(f64::from).collect();
            let uab = u_statistic(&a, &b).unwrap();
            let uba = u_statistic(&b, &a).unwrap();
            proptest::prop_assert_eq!(uab + uba, (a.len() * b.len()) as f64);
            proptest::prop_assert!(uab >= 0.0 && uab <= (a.len() * b.len()) as f64);
        }

        #[test]
        fn kruskal_wallis_is_rank_invariant(
            g in proptest::collection::vec(proptest::collection::vec(-50.0..50.0f64, 2..6), 2..5),
        ) {
            let r = kruskal_wallis(&g).unwrap();
            proptest::prop_assert!(r.statistic >= 0.0);
            let mapped: Vec<Vec<f64>> =
                g.iter().map(|v| v.iter().map(|x| libm::exp(x / 10.0) + 3.0).collect()).collect();
            let m = kruskal_wallis(&mapped).unwrap();
            proptest::prop_assert!((r.statistic - m.statistic).abs() <= 1e-9 * (1.0 + r.statistic));
        }
    }
}
