//! Test oracles shared by the integration tests and the acceptance suite.
//! Nothing here uses canonical codes, so it can check them.
#![allow(dead_code)]

use bgrw_core::process::{run_trajectory, BgrwConfig, InitialTree, TreeState};
use bgrw_core::topology::{canonical_encode, CanonicalCode, RootedBall};
use rand::seq::SliceRandom;
use rand::Rng;

pub type Edges = Vec<(u32, u32)>;

/// Rooted unlabeled trees with n vertices, n = 1..=12 (OEIS A000081).
pub const ROOTED_TREE_COUNTS: [usize; 12] = [1, 1, 2, 4, 9, 20, 48, 115, 286, 719, 1842, 4766];

/// Every parent array on n vertices with `parent[i] < i`, rooted at 0.
pub fn parent_arrays(n: usize) -> Vec<Vec<u32>> {
    let mut out = vec![vec![u32::MAX]];
    for i in 1..n {
        out = out
            .into_iter()
            .flat_map(|a| {
                (0..i as u32).map(move |p| {
                    let mut b = a.clone();
                    b.push(p);
                    b
                })
            })
            .collect();
    }
    out
}

pub fn edges_of(parent: &[u32]) -> Edges {
    (1..parent.len()).map(|i| (parent[i], i as u32)).collect()
}

/// Children lists of the tree rooted at `root`.
pub fn children(n: usize, edges: &[(u32, u32)], root: u32) -> Vec<Vec<u32>> {
    let mut adj = vec![Vec::new(); n];
    for &(u, v) in edges {
        adj[u as usize].push(v);
        adj[v as usize].push(u);
    }
    let mut kids = vec![Vec::new(); n];
    let mut seen = vec![false; n];
    let mut stack = vec![root];
    seen[root as usize] = true;
    while let Some(u) = stack.pop() {
        for &v in &adj[u as usize] {
            if !seen[v as usize] {
                seen[v as usize] = true;
                kids[u as usize].push(v);
                stack.push(v);
            }
        }
    }
    kids
}

/// Rooted isomorphism by searching for a child bijection at every vertex.
pub fn brute_isomorphic(a: &[Vec<u32>], ra: u32, b: &[Vec<u32>], rb: u32) -> bool {
    fn go(a: &[Vec<u32>], u: u32, b: &[Vec<u32>], v: u32) -> bool {
        let (ka, kb) = (&a[u as usize], &b[v as usize]);
        if ka.len() != kb.len() {
            return false;
        }
        let mut used = vec![false; kb.len()];
        fn assign(a: &[Vec<u32>], ka: &[u32], b: &[Vec<u32>], kb: &[u32], i: usize, used: &mut [bool]) -> bool {
            if i == ka.len() {
                return true;
            }
            for j in 0..kb.len() {
                if !used[j] && go(a, ka[i], b, kb[j]) {
                    used[j] = true;
                    if assign(a, ka, b, kb, i + 1, used) {
                        return true;
                    }
                    used[j] = false;
                }
            }
            false
        }
        assign(a, ka, b, kb, 0, &mut used)
    }
    a.len() == b.len() && go(a, ra, b, rb)
}

pub fn code_of(n: usize, edges: &[(u32, u32)], root: u32) -> CanonicalCode {
    canonical_encode(&RootedBall::from_edges(n, edges, root).expect("valid tree"))
}

/// Applies `perm` to every vertex id.
pub fn relabel(edges: &[(u32, u32)], perm: &[u32]) -> Edges {
    edges.iter().map(|&(u, v)| (perm[u as usize], perm[v as usize])).collect()
}

/// Calls `f` on every permutation of `0..n` (Heap's algorithm).
pub fn for_each_permutation(n: usize, mut f: impl FnMut(&[u32])) {
    let mut perm: Vec<u32> = (0..n as u32).collect();
    let mut c = vec![0usize; n];
    f(&perm);
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            f(&perm);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

/// Random tree on `n` vertices: each new vertex attaches uniformly, to a
/// recent vertex (long and thin) or near the root (short and bushy).
pub fn random_tree<R: Rng>(n: usize, rng: &mut R) -> Edges {
    let style = rng.gen_range(0..3);
    (1..n as u32)
        .map(|i| {
            let p = match style {
                0 => rng.gen_range(0..i),
                1 => i - 1 - rng.gen_range(0..i.min(3)),
                _ => rng.gen_range(0..i.min(4)),
            };
            (p, i)
        })
        .collect()
}

pub fn random_permutation<R: Rng>(n: usize, rng: &mut R) -> Vec<u32> {
    let mut p: Vec<u32> = (0..n as u32).collect();
    p.shuffle(rng);
    p
}

/// A reachable walk state: a random initial tree, `p` and number of steps.
pub fn random_state<R: Rng>(rng: &mut R) -> TreeState {
    let initial = match rng.gen_range(0..4) {
        0 => InitialTree::Single,
        1 => InitialTree::Path(rng.gen_range(1..6)),
        2 => InitialTree::Star(rng.gen_range(1..6)),
        _ => InitialTree::PathWithLeaf(rng.gen_range(1..6)),
    };
    let steps = if rng.gen_bool(0.1) { 0 } else { rng.gen_range(1..400) };
    let p = rng.gen_range(0.05..=1.0);
    let mut c = BgrwConfig::new(p, steps, rng.gen(), initial);
    c.options.record_series = false;
    c.options.keep_final_tree = true;
    run_trajectory(&c, &mut []).unwrap().final_tree.unwrap()
}
