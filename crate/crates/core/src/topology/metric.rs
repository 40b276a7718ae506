use crate::error::Result;
use crate::process::tree::TreeState;
use crate::topology::ball::extract_ball;
use crate::topology::canon::canonical_encode;
use crate::VertexId;

/// The local distance between two rooted trees, observed through balls of
/// radius at most `r_max`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rho {
    /// The trees are finite and rooted-isomorphic.
    Zero,
    /// Balls agree up to radius `agree_through` and differ one step later:
    /// the distance is exactly `1 / (1 + agree_through)`.
    Exact { agree_through: u32 },
    /// Balls agree through `r_max`; the distance is at most `1 / (1 + r_max)`.
    AtMost { r_max: u32 },
}

impl Rho {
    pub fn value(self) -> f64 {
        match self {
            Rho::Zero => 0.0,
            Rho::Exact { agree_through: s } | Rho::AtMost { r_max: s } => 1.0 / (1.0 + s as f64),
        }
    }

    /// `(numerator, denominator)` of the value (or bound).
    pub fn as_ratio(self) -> (u64, u64) {
        match self {
            Rho::Zero => (0, 1),
            Rho::Exact { agree_through: s } | Rho::AtMost { r_max: s } => (1, 1 + s as u64),
        }
    }

    pub fn is_upper_bound(self) -> bool {
        matches!(self, Rho::AtMost { .. })
    }
}

/// `1 / (1 + sup{r : [A,a]_r ≃ [B,b]_r})` with the supremum searched up to
/// `r_max`.
///
/// Reports `Zero` only when both radius-`r_max` balls already cover their
/// whole (finite) trees and agree.
pub fn rho_distance(a: (&TreeState, VertexId), b: (&TreeState, VertexId), r_max: u32) -> Result<Rho> {
    let ball_a = extract_ball(a.0, a.1, r_max)?;
    let ball_b = extract_ball(b.0, b.1, r_max)?;
    for r in 1..=r_max {
        let ca = canonical_encode(&ball_a.truncate(r));
        let cb = canonical_encode(&ball_b.truncate(r));
        if ca != cb {
            return Ok(Rho::Exact { agree_through: r - 1 });
        }
    }
    let whole_a = !a.0.is_lazy() && ball_a.len() == a.0.vertex_count();
    let whole_b = !b.0.is_lazy() && ball_b.len() == b.0.vertex_count();
    if whole_a && whole_b {
        Ok(Rho::Zero)
    } else {
        Ok(Rho::AtMost { r_max })
    }
}
