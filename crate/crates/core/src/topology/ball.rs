use crate::error::{invalid, Error, Result};
use crate::process::tree::TreeState;
use crate::VertexId;

const NONE: u32 = u32::MAX;

/// A finite rooted tree, stored in breadth-first order from its center.
///
/// Local vertex `0` is the center and `parent[i] < i` for every other vertex;
/// the children of each vertex occupy a contiguous run of local ids.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootedBall {
    vertices: Vec<VertexId>,
    parent: Vec<u32>,
    depth: Vec<u32>,
    radius: u32,
}

impl RootedBall {
    /// Builds a rooted tree from an arbitrary edge list rooted at `center`.
    /// The radius is the height of the tree.
    pub fn from_edges(vertex_count: usize, edges: &[(u32, u32)], center: u32) -> Result<Self> {
        if vertex_count == 0 || center as usize >= vertex_count {
            return Err(invalid("center", "not a vertex of the tree"));
        }
        if edges.len() + 1 != vertex_count {
            return Err(invalid("edges", "edge count must be vertex count - 1"));
        }
        let mut adjacency = vec![Vec::new(); vertex_count];
        for &(u, v) in edges {
            if u as usize >= vertex_count || v as usize >= vertex_count || u == v {
                return Err(invalid("edges", format!("bad edge ({u}, {v})")));
            }
            adjacency[u as usize].push(v);
            adjacency[v as usize].push(u);
        }
        let mut ball = bfs_ball(center, u32::MAX, |v| &adjacency[v as usize])?;
        if ball.len() != vertex_count {
            return Err(invalid("edges", "edge set is not connected"));
        }
        ball.radius = ball.height();
        Ok(ball)
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn radius(&self) -> u32 {
        self.radius
    }

    /// Source-tree ids of the local vertices, center first.
    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn center(&self) -> VertexId {
        self.vertices[0]
    }

    pub fn parent(&self, local: u32) -> Option<u32> {
        let p = self.parent[local as usize];
        (p != NONE).then_some(p)
    }

    pub fn depth(&self, local: u32) -> u32 {
        self.depth[local as usize]
    }

    /// Largest distance from the center actually present.
    pub fn height(&self) -> u32 {
        self.depth.last().copied().unwrap_or(0)
    }

    /// Local adjacency lists.
    pub fn adjacency(&self) -> Vec<Vec<u32>> {
        let mut adj = vec![Vec::new(); self.len()];
        for (i, &p) in self.parent.iter().enumerate().skip(1) {
            adj[p as usize].push(i as u32);
            adj[i].push(p);
        }
        adj
    }

    /// Local edges `(parent, child)`.
    pub fn edges(&self) -> Vec<(u32, u32)> {
        self.parent
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &p)| (p, i as u32))
            .collect()
    }

    /// `[start, end)` local ids of each vertex's children.
    pub(crate) fn child_ranges(&self) -> Vec<(u32, u32)> {
        let n = self.len();
        let mut ranges = vec![(0u32, 0u32); n];
        let mut i = 1;
        while i < n {
            let p = self.parent[i];
            let start = i;
            while i < n && self.parent[i] == p {
                i += 1;
            }
            ranges[p as usize] = (start as u32, i as u32);
        }
        ranges
    }

    /// The sub-ball of radius `r <= self.radius()` around the same center.
    pub fn truncate(&self, r: u32) -> RootedBall {
        let keep = self.depth.partition_point(|&d| d <= r);
        RootedBall {
            vertices: self.vertices[..keep].to_vec(),
            parent: self.parent[..keep].to_vec(),
            depth: self.depth[..keep].to_vec(),
            radius: r.min(self.radius),
        }
    }
}

fn bfs_ball<'a, F>(center: u32, radius: u32, neighbors: F) -> Result<RootedBall>
where
    F: Fn(u32) -> &'a [u32],
{
    let mut vertices = vec![center];
    let mut parent = vec![NONE];
    let mut depth = vec![0u32];
    let mut from = vec![u32::MAX];
    let mut head = 0;
    while head < vertices.len() {
        let v = vertices[head];
        let d = depth[head];
        if d < radius {
            for &u in neighbors(v) {
                if u != from[head] {
                    vertices.push(u);
                    parent.push(head as u32);
                    depth.push(d + 1);
                    from.push(v);
                }
            }
        }
        head += 1;
        if vertices.len() > u32::MAX as usize / 2 {
            return Err(invalid("radius", "ball too large"));
        }
    }
    Ok(RootedBall {
        vertices,
        parent,
        depth,
        radius,
    })
}

/// The induced subtree of all vertices within distance `r` of `center`.
pub fn extract_ball(tree: &TreeState, center: VertexId, r: u32) -> Result<RootedBall> {
    if !tree.contains(center) {
        return Err(Error::UnknownVertex(center));
    }
    if tree.is_lazy() {
        check_materialized(tree, center, r)?;
    }
    bfs_ball(center, r, |v| tree.neighbors(v))
}

/// Every vertex at distance `< r` from `center` must have its full neighbor
/// list (distance `<= r` when `inclusive`).
fn check_materialized_impl(tree: &TreeState, center: VertexId, r: u32, inclusive: bool) -> Result<()> {
    let mut stack = vec![(center, VertexId::MAX, 0u32)];
    while let Some((v, from, d)) = stack.pop() {
        if d == r && !inclusive {
            continue;
        }
        if !tree.is_expanded(v) {
            return Err(Error::Unmaterialized(v));
        }
        if d == r {
            continue;
        }
        for &u in tree.neighbors(v) {
            if u != from {
                stack.push((u, v, d + 1));
            }
        }
    }
    Ok(())
}

fn check_materialized(tree: &TreeState, center: VertexId, r: u32) -> Result<()> {
    check_materialized_impl(tree, center, r, false)
}

/// Largest full-tree degree among vertices within distance `r` of `center`.
pub fn max_degree_within(tree: &TreeState, center: VertexId, r: u32) -> Result<usize> {
    if !tree.contains(center) {
        return Err(Error::UnknownVertex(center));
    }
    if tree.is_lazy() {
        check_materialized_impl(tree, center, r, true)?;
    }
    let ball = bfs_ball(center, r, |v| tree.neighbors(v))?;
    Ok(ball
        .vertices()
        .iter()
        .map(|&v| tree.degree(v))
        .max()
        .unwrap_or(0))
}
