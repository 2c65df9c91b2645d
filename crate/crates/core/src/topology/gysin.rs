//! Betti numbers of circle bundles from the Gysin sequence.
//!
//! For `S¹ → P → B` with Euler class `e` the Gysin sequence splits into
//! `b_k(P) = corank(∪e : H^{k−2} → H^k) + nullity(∪e : H^{k−1} → H^{k+1})`,
//! so the base Betti numbers and the ranks of the cup maps determine `P`.

use crate::error::{Error, Result};

/// Betti numbers of a base together with the ranks of `∪e : H^j → H^{j+2}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GysinInput {
    betti: Vec<i64>,
    ranks: Vec<i64>,
}

impl GysinInput {
    /// `ranks[j]` is the rank of `∪e : H^j → H^{j+2}` for `j = 0..=n−2`,
    /// where `n + 1 = betti.len()`.
    pub fn new(betti: Vec<i64>, ranks: Vec<i64>) -> Result<Self> {
        if betti.is_empty() {
            return Err(Error::InconsistentRanks("empty Betti vector".into()));
        }
        if let Some((j, b)) = betti.iter().enumerate().find(|(_, &b)| b < 0) {
            return Err(Error::InconsistentRanks(format!("b_{j} = {b} is negative")));
        }
        let expected = betti.len().saturating_sub(2);
        if ranks.len() != expected {
            return Err(Error::InconsistentRanks(format!("{} cup ranks given, a base of dimension {} needs {expected}", ranks.len(), betti.len() - 1)));
        }
        for (j, &r) in ranks.iter().enumerate() {
            let cap = betti[j].min(betti[j + 2]);
            if r < 0 || r > cap {
                return Err(Error::InconsistentRanks(format!("rank of H^{j} -> H^{} is {r}, must lie in [0, {cap}]", j + 2)));
            }
        }
        Ok(GysinInput { betti, ranks })
    }

    /// The trivial bundle: every cup map is zero.
    pub fn trivial(betti: Vec<i64>) -> Result<Self> {
        let n = betti.len().saturating_sub(2);
        Self::new(betti, vec![0; n])
    }

    pub fn betti(&self) -> &[i64] {
        &self.betti
    }

    pub fn ranks(&self) -> &[i64] {
        &self.ranks
    }

    pub fn base_dim(&self) -> usize {
        self.betti.len() - 1
    }

    fn b(&self, j: isize) -> i64 {
        usize::try_from(j).ok().and_then(|j| self.betti.get(j)).copied().unwrap_or(0)
    }

    fn r(&self, j: isize) -> i64 {
        usize::try_from(j).ok().and_then(|j| self.ranks.get(j)).copied().unwrap_or(0)
    }

    /// Degrees `j` with `b_j ≠ b_{n−j}`. Open bases legitimately break this,
    /// so the result is a warning list.
    pub fn poincare_warnings(&self) -> Vec<String> {
        let n = self.base_dim();
        (0..=n / 2)
            .filter(|&j| self.betti[j] != self.betti[n - j])
            .map(|j| format!("b_{j} = {} differs from b_{} = {}; fine for an open base", self.betti[j], n - j, self.betti[n - j]))
            .collect()
    }
}

/// Betti numbers `b₀, …, b_n` of a space of dimension `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BettiVector(pub Vec<i64>);

impl BettiVector {
    pub fn get(&self, k: usize) -> i64 {
        self.0.get(k).copied().unwrap_or(0)
    }

    pub fn dim(&self) -> usize {
        self.0.len() - 1
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.0.iter().enumerate().map(|(k, b)| if k % 2 == 0 { *b } else { -*b }).sum()
    }
}

pub fn gysin_betti(g: &GysinInput) -> BettiVector {
    let n = g.base_dim() as isize;
    BettiVector(
        (0..=n + 1)
            .map(|k| (g.b(k) - g.r(k - 2)) + (g.b(k - 1) - g.r(k - 1)))
            .collect(),
    )
}

/// Iterated circle bundles, as for a `T²`-bundle built in two steps. Each
/// stage supplies the cup-rank table of its Euler class on the previous
/// total space. Returns every intermediate Betti vector, last one on top.
pub fn gysin_tower(base: Vec<i64>, stages: &[Vec<i64>]) -> Result<Vec<BettiVector>> {
    let mut current = base;
    let mut out = Vec::with_capacity(stages.len());
    for ranks in stages {
        let p = gysin_betti(&GysinInput::new(current, ranks.clone())?);
        current = p.0.clone();
        out.push(p);
    }
    Ok(out)
}

/// Betti numbers of `B × S¹`.
pub fn kunneth_circle(betti: &[i64]) -> BettiVector {
    BettiVector((0..=betti.len()).map(|k| betti.get(k).copied().unwrap_or(0) + if k > 0 { betti[k - 1] } else { 0 }).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn hopf_fibration() {
        let p = gysin_betti(&GysinInput::new(vec![1, 0, 1], vec![1]).unwrap());
        assert_eq!(p, BettiVector(vec![1, 0, 0, 1]));
    }

    #[test]
    fn trivial_bundle_over_sphere() {
        let p = gysin_betti(&GysinInput::trivial(vec![1, 0, 1]).unwrap());
        assert_eq!(p, BettiVector(vec![1, 1, 1, 1]));
    }

    #[test]
    fn small_resolution_tower() {
        for p in 2..=10 {
            let tower = gysin_tower(vec![1, 0, p, 0, 0, 0, 0], &[vec![1, 0, 0, 0, 0], vec![1, 0, 0, 0, 0, 0]]).unwrap();
            assert_eq!(tower[0].0, vec![1, 0, p - 1, p, 0, 0, 0, 0]);
            let m = &tower[1];
            assert_eq!((m.get(2), m.get(3)), (p - 2, 2 * p - 1));
            assert_eq!(m.0, vec![1, 0, p - 2, 2 * p - 1, p, 0, 0, 0, 0]);
            assert_eq!(m.euler_characteristic(), 0);
        }
    }

    #[test]
    fn bad_ranks_are_rejected() {
        assert!(matches!(GysinInput::new(vec![1, 0, 1], vec![2]), Err(Error::InconsistentRanks(_))));
        assert!(matches!(GysinInput::new(vec![1, 0, 1], vec![]), Err(Error::InconsistentRanks(_))));
        assert!(matches!(GysinInput::new(vec![1, -1, 1], vec![0]), Err(Error::InconsistentRanks(_))));
    }

    #[test]
    fn poincare_warnings_flag_open_bases() {
        assert!(GysinInput::new(vec![1, 0, 1], vec![1]).unwrap().poincare_warnings().is_empty());
        let open = GysinInput::new(vec![1, 0, 3, 0, 0, 0, 0], vec![1, 0, 0, 0, 0]).unwrap();
        assert_eq!(open.poincare_warnings().len(), 2);
    }

    fn input() -> impl Strategy<Value = GysinInput> {
        prop::collection::vec(0i64..6, 1..9).prop_flat_map(|b| {
            let caps: Vec<i64> = (0..b.len().saturating_sub(2)).map(|j| b[j].min(b[j + 2])).collect();
            let ranks = caps.into_iter().map(|c| 0..=c).collect::<Vec<_>>();
            (Just(b), ranks).prop_map(|(b, r)| GysinInput::new(b, r).unwrap())
        })
    }

    proptest! {
        #[test]
        fn euler_characteristic_vanishes(g in input()) {
            prop_assert_eq!(gysin_betti(&g).euler_characteristic(), 0);
        }

        #[test]
        fn zero_euler_class_is_kunneth(b in prop::collection::vec(0i64..6, 1..9)) {
            let g = GysinInput::trivial(b.clone()).unwrap();
            prop_assert_eq!(gysin_betti(&g), kunneth_circle(&b));
        }

        #[test]
        fn total_space_betti_numbers_are_nonnegative(g in input()) {
            prop_assert!(gysin_betti(&g).0.iter().all(|&b| b >= 0));
        }
    }
}
