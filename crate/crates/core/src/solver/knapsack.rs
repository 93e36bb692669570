//! 0-1 knapsack over integer weights.

#[derive(Debug, Default)]
pub(crate) struct Knapsack {
    capacity: usize,
    weights: Vec<usize>,
    profits: Vec<f64>,
    /// `forward[i * (cap + 1) + c]`: best using items `< i` within weight `c`.
    forward: Vec<f64>,
}

impl Knapsack {
    pub(crate) fn solve(&mut self, capacity: usize, weights: &[usize], profits: &[f64]) -> f64 {
        self.capacity = capacity;
        self.weights.clear();
        self.weights.extend_from_slice(weights);
        self.profits.clear();
        self.profits.extend_from_slice(profits);
        let n = weights.len();
        let w = capacity + 1;
        self.forward.clear();
        self.forward.resize((n + 1) * w, 0.0);
        for i in 0..n {
            let (wi, pi) = (weights[i], profits[i]);
            let (prev, next) = self.forward[i * w..(i + 2) * w].split_at_mut(w);
            next.copy_from_slice(prev);
            if pi > 0.0 {
                for c in wi..w {
                    let take = prev[c - wi] + pi;
                    if take > next[c] {
                        next[c] = take;
                    }
                }
            }
        }
        self.forward[n * w + capacity]
    }

    /// Items picked by the last [`Knapsack::solve`], as indices into its
    /// item slice.
    pub(crate) fn selection(&self) -> Vec<usize> {
        let w = self.capacity + 1;
        let mut c = self.capacity;
        let mut picked = Vec::new();
        for i in (0..self.weights.len()).rev() {
            if self.forward[(i + 1) * w + c] > self.forward[i * w + c] {
                picked.push(i);
                c -= self.weights[i];
            }
        }
        picked.reverse();
        picked
    }
}

/// Exact integer knapsack returning the picked item indices.
pub(crate) fn integer_knapsack(capacity: usize, weights: &[usize], profits: &[i64]) -> Vec<usize> {
    let mut k = Knapsack::default();
    let profits: Vec<f64> = profits.iter().map(|&p| p as f64).collect();
    k.solve(capacity, weights, &profits);
    k.selection()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn brute(capacity: usize, weights: &[usize], profits: &[f64]) -> Option<f64> {
        let n = weights.len();
        let mut best: Option<f64> = None;
        for mask in 0u32..(1 << n) {
            let w: usize = (0..n).filter(|&i| mask >> i & 1 == 1).map(|i| weights[i]).sum();
            if w <= capacity {
                let p: f64 = (0..n).filter(|&i| mask >> i & 1 == 1).map(|i| profits[i]).sum();
                best = Some(best.map_or(p, |b: f64| b.max(p)));
            }
        }
        best
    }

    #[test]
    fn matches_enumeration() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut k = Knapsack::default();
        for _ in 0..300 {
            let n = rng.gen_range(0..9);
            let cap = rng.gen_range(0..12);
            let weights: Vec<usize> = (0..n).map(|_| rng.gen_range(1..6)).collect();
            let profits: Vec<f64> = (0..n).map(|_| rng.gen_range(0..20) as f64 * 0.5).collect();
            let best = k.solve(cap, &weights, &profits);
            assert_eq!(best, brute(cap, &weights, &profits).unwrap());
            let sel = k.selection();
            assert!(sel.iter().map(|&i| weights[i]).sum::<usize>() <= cap);
            assert_eq!(sel.iter().map(|&i| profits[i]).sum::<f64>(), best);
        }
    }
}
