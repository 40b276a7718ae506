use crate::error::{check_growth_probability, invalid, Result};
use crate::process::kernel::{one_step_distribution, Move};
use crate::process::tree::TreeState;

/// Expected one-step change of the distance to the root from a non-root
/// vertex of degree `d`: `p(d-1)/(d+1) + (1-p)(d-2)/d`.
pub fn drift_psi(d: usize, p: f64) -> Result<f64> {
    check_growth_probability(p)?;
    if d == 0 {
        return Err(invalid("d", "degree must be >= 1"));
    }
    let d = d as f64;
    Ok(p * (d - 1.0) / (d + 1.0) + (1.0 - p) * (d - 2.0) / d)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DriftCheck {
    /// `psi + (1 - psi) * 1{walker = root}`.
    pub analytic: f64,
    /// Expectation of the distance change under the exact kernel.
    pub kernel: f64,
    pub difference: f64,
}

pub fn drift_identity_check(state: &TreeState, p: f64) -> Result<DriftCheck> {
    check_growth_probability(p)?;
    let w = state.walker();
    let here = state.depth(w) as f64;
    let kernel: f64 = one_step_distribution(state, p)?
        .into_iter()
        .map(|(o, prob)| {
            let to = match o.next {
                Move::Neighbor(v) => state.depth(v) as f64,
                Move::NewLeaf => here + 1.0,
            };
            prob * (to - here)
        })
        .sum();
    let d = state.degree(w);
    let analytic = if d == 0 {
        // the isolated start is the root and always moves away
        1.0
    } else {
        let psi = drift_psi(d, p)?;
        psi + (1.0 - psi) * (w == state.root()) as u8 as f64
    };
    Ok(DriftCheck {
        analytic,
        kernel,
        difference: (analytic - kernel).abs(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::process::provider::{make_initial_tree, InitialTree};

    #[test]
    fn psi_values() {
        assert_eq!(drift_psi(1, 0.5).unwrap(), -0.5);
        assert!((drift_psi(2, 0.9).unwrap() - 0.3).abs() < 1e-15);
        assert!((drift_psi(3, 0.5).unwrap() - 5.0 / 12.0).abs() < 1e-15);
        assert!(drift_psi(0, 0.5).is_err());
        assert!(drift_psi(2, 0.0).is_err());
    }

    #[test]
    fn root_moves_away() {
        let t = make_initial_tree(InitialTree::Star(4)).unwrap();
        let c = drift_identity_check(&t, 0.3).unwrap();
        assert_eq!((c.analytic, c.kernel), (1.0, 1.0));
    }

    #[test]
    fn far_leaf() {
        let t = make_initial_tree(InitialTree::Path(3)).unwrap();
        let c = drift_identity_check(&t, 0.5).unwrap();
        assert_eq!(c.analytic, -0.5);
        assert!(c.difference < 1e-12);
    }
}
