//! Scale-free directed interaction graph via a bipartite projection.
//!
//! Each of the 14 variables draws desired out- and in-degrees from the
//! truncated power law `Pr(D = d) = d^-2 / sum_l l^-2` on `{1..8}`, wires
//! to the 8 interaction nodes with probabilities `D/8` per candidate edge,
//! and the bipartite graph is projected: a directed edge `i -> j` exists
//! iff some interaction node h carries both `i -> h` and `h -> j`.
//! Multiple such paths collapse to one edge; self-loops are retained.
//! The two driver channels then attach to each variable independently.

use rand::Rng;
use serde::{Deserialize, Serialize};

pub const N_VARS: usize = 14;
pub const N_HIDDEN: usize = 8;
pub const DEGREE_MAX: usize = 8;
pub const P_DRIVER_INPUT: f64 = 0.8;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InteractionGraph {
    pub n_vars: usize,
    /// `parents[i]` lists variables j (ascending) with a directed edge
    /// `j -> i`; may include i itself.
    pub parents: Vec<Vec<usize>>,
    /// Per variable: whether driver channel x / y feeds it.
    pub driver_attached: Vec<[bool; 2]>,
    /// Sampled desired degrees, recorded for provenance.
    pub out_degree_draws: Vec<usize>,
    pub in_degree_draws: Vec<usize>,
}

impl InteractionGraph {
    /// Input dimension of the flow function of variable `i`.
    pub fn in_dim(&self, i: usize) -> usize {
        self.parents[i].len()
            + self.driver_attached[i][0] as usize
            + self.driver_attached[i][1] as usize
    }
}

/// Truncated power-law degree draw: `Pr(D = d) ~ d^-2`, `d in 1..=8`.
pub fn sample_degree(rng: &mut impl Rng) -> usize {
    let weights: Vec<f64> = (1..=DEGREE_MAX).map(|d| 1.0 / (d * d) as f64).collect();
    crate::rng::weighted_index(rng, &weights) + 1
}

/// Normalization constant `sum_{l=1..8} l^-2` of the degree pmf.
pub fn degree_pmf_norm() -> f64 {
    (1..=DEGREE_MAX).map(|d| 1.0 / (d * d) as f64).sum()
}

/// Project a bipartite variable/interaction-node graph to a directed
/// variable graph.
fn project(
    var_to_hidden: &[[bool; N_HIDDEN]],
    hidden_to_var: &[[bool; N_VARS]],
    n_vars: usize,
) -> Vec<Vec<usize>> {
    let mut parents = vec![Vec::new(); n_vars];
    for i in 0..n_vars {
        for j in 0..n_vars {
            let connected =
                (0..N_HIDDEN).any(|h| var_to_hidden[i][h] && hidden_to_var[h][j]);
            if connected {
                parents[j].push(i);
            }
        }
    }
    parents
}

/// Sample the interaction graph.
pub fn sample_graph(rng: &mut impl Rng) -> InteractionGraph {
    let out_degree_draws: Vec<usize> = (0..N_VARS).map(|_| sample_degree(rng)).collect();
    let in_degree_draws: Vec<usize> = (0..N_VARS).map(|_| sample_degree(rng)).collect();

    let mut var_to_hidden = [[false; N_HIDDEN]; N_VARS];
    let mut hidden_to_var = [[false; N_VARS]; N_HIDDEN];
    for i in 0..N_VARS {
        let p_out = out_degree_draws[i] as f64 / N_HIDDEN as f64;
        let p_in = in_degree_draws[i] as f64 / N_HIDDEN as f64;
        for h in 0..N_HIDDEN {
            if rng.random::<f64>() < p_out {
                var_to_hidden[i][h] = true;
            }
            if rng.random::<f64>() < p_in {
                hidden_to_var[h][i] = true;
            }
        }
    }
    let parents = project(&var_to_hidden, &hidden_to_var, N_VARS);

    let driver_attached = (0..N_VARS)
        .map(|_| [rng.random::<f64>() < P_DRIVER_INPUT, rng.random::<f64>() < P_DRIVER_INPUT])
        .collect();

    InteractionGraph {
        n_vars: N_VARS,
        parents,
        driver_attached,
        out_degree_draws,
        in_degree_draws,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SeedTree;

    #[test]
    fn degree_pmf_head_matches_normalization() {
        // Pr(D = 1) = 1 / sum l^-2 = 1/1.527422... ~ 0.6547.
        let norm = degree_pmf_norm();
        assert!((norm - 1.5274220).abs() < 1e-6);
        let mut rng = SeedTree::new(2).stream("graph-pmf");
        let n = 100_000;
        let ones = (0..n).filter(|_| sample_degree(&mut rng) == 1).count();
        let f = ones as f64 / n as f64;
        assert!((f - 1.0 / norm).abs() < 0.005, "Pr(D=1) = {f}");
    }

    #[test]
    fn projection_definition_toy() {
        // 2 variables, edges 1 -> h0 and h0 -> 2 (0-indexed: 0 -> h0 -> 1).
        let mut v2h = [[false; N_HIDDEN]; N_VARS];
        let mut h2v = [[false; N_VARS]; N_HIDDEN];
        v2h[0][0] = true;
        h2v[0][1] = true;
        let parents = project(&v2h, &h2v, 2);
        assert_eq!(parents[1], vec![0]);
        assert!(parents[0].is_empty());
    }

    #[test]
    fn multi_path_collapses_to_one_edge() {
        let mut v2h = [[false; N_HIDDEN]; N_VARS];
        let mut h2v = [[false; N_VARS]; N_HIDDEN];
        // 0 -> h0 -> 1 and 0 -> h1 -> 1.
        v2h[0][0] = true;
        v2h[0][1] = true;
        h2v[0][1] = true;
        h2v[1][1] = true;
        let parents = project(&v2h, &h2v, 2);
        assert_eq!(parents[1], vec![0]);
    }

    #[test]
    fn self_loops_retained() {
        let mut v2h = [[false; N_HIDDEN]; N_VARS];
        let mut h2v = [[false; N_VARS]; N_HIDDEN];
        v2h[3][5] = true;
        h2v[5][3] = true;
        let parents = project(&v2h, &h2v, N_VARS);
        assert_eq!(parents[3], vec![3]);
    }

    #[test]
    fn driver_attachment_rate() {
        let mut rng = SeedTree::new(9).stream("graph-drivers");
        let mut attached = 0usize;
        let mut total = 0usize;
        for _ in 0..2000 {
            let g = sample_graph(&mut rng);
            for i in 0..N_VARS {
                attached += g.driver_attached[i][0] as usize + g.driver_attached[i][1] as usize;
                total += 2;
            }
        }
        let f = attached as f64 / total as f64;
        assert!((f - P_DRIVER_INPUT).abs() < 0.01, "attachment rate {f}");
    }
}
