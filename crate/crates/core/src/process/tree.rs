use std::collections::VecDeque;

use smallvec::SmallVec;

use crate::error::{invalid, Error, Result};
use crate::process::provider::Growth;
use crate::VertexId;

/// Parent of the root.
pub const NO_PARENT: VertexId = VertexId::MAX;

pub(crate) type Neighbors = SmallVec<[VertexId; 4]>;

/// Default cap on lazily materialized vertices.
pub const DEFAULT_MATERIALIZATION_CAP: usize = 10_000_000;

/// Frontier bookkeeping for trees whose initial part is infinite.
///
/// Provider vertices are materialized with their children pending; a vertex is
/// expanded the first time the walker stands on it or a query needs its full
/// neighborhood.
#[derive(Clone, Debug)]
struct LazyFrontier {
    growth: Growth,
    pending: Vec<bool>,
    provided: Vec<bool>,
    materialized: usize,
    cap: usize,
}

/// A rooted tree together with the walker's position and the step clock.
///
/// Vertex ids are dense and append-only: a leaf created by the walk gets the
/// current vertex count as its id. `depth[v]` is the distance from `v` to the
/// root and is maintained incrementally.
#[derive(Clone, Debug)]
pub struct TreeState {
    adjacency: Vec<Neighbors>,
    parent: Vec<VertexId>,
    depth: Vec<u32>,
    root: VertexId,
    walker: VertexId,
    time: u64,
    lazy: Option<LazyFrontier>,
}

impl TreeState {
    /// Builds a finite tree from an edge list, checking the tree property.
    pub fn from_edges(
        vertex_count: usize,
        edges: &[(VertexId, VertexId)],
        root: VertexId,
        walker: VertexId,
    ) -> Result<Self> {
        if vertex_count == 0 {
            return Err(invalid("vertices", "a tree needs at least one vertex"));
        }
        if vertex_count > VertexId::MAX as usize {
            return Err(invalid("vertices", "too many vertices"));
        }
        if edges.len() + 1 != vertex_count {
            return Err(invalid(
                "edges",
                format!("{} edges for {} vertices", edges.len(), vertex_count),
            ));
        }
        let mut adjacency = vec![Neighbors::new(); vertex_count];
        for &(u, v) in edges {
            if u as usize >= vertex_count || v as usize >= vertex_count || u == v {
                return Err(invalid("edges", format!("bad edge ({u}, {v})")));
            }
            adjacency[u as usize].push(v);
            adjacency[v as usize].push(u);
        }
        for (name, v) in [("root", root), ("walker", walker)] {
            if v as usize >= vertex_count {
                return Err(invalid(name, format!("vertex {v} out of range")));
            }
        }
        let (parent, depth) = bfs_parents(&adjacency, root)
            .ok_or_else(|| invalid("edges", "edge set is not connected"))?;
        Ok(Self {
            adjacency,
            parent,
            depth,
            root,
            walker,
            time: 0,
            lazy: None,
        })
    }

    /// A single provider root whose descendants are materialized on demand.
    pub(crate) fn lazy(growth: Growth, cap: usize) -> Result<Self> {
        let mut state = Self {
            adjacency: vec![Neighbors::new()],
            parent: vec![NO_PARENT],
            depth: vec![0],
            root: 0,
            walker: 0,
            time: 0,
            lazy: Some(LazyFrontier {
                growth,
                pending: vec![true],
                provided: vec![true],
                materialized: 1,
                cap,
            }),
        };
        state.ensure_expanded(0)?;
        Ok(state)
    }

    pub fn vertex_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.len() - 1
    }

    #[inline]
    pub fn degree(&self, v: VertexId) -> usize {
        self.adjacency[v as usize].len()
    }

    #[inline]
    pub fn neighbors(&self, v: VertexId) -> &[VertexId] {
        &self.adjacency[v as usize]
    }

    /// Parent of `v` towards the root, or `None` at the root.
    #[inline]
    pub fn parent(&self, v: VertexId) -> Option<VertexId> {
        let p = self.parent[v as usize];
        (p != NO_PARENT).then_some(p)
    }

    #[inline]
    pub fn depth(&self, v: VertexId) -> u32 {
        self.depth[v as usize]
    }

    pub fn root(&self) -> VertexId {
        self.root
    }

    pub fn walker(&self) -> VertexId {
        self.walker
    }

    pub fn time(&self) -> u64 {
        self.time
    }

    /// Distance from the walker to the root.
    #[inline]
    pub fn walker_depth(&self) -> u32 {
        self.depth[self.walker as usize]
    }

    #[inline]
    pub fn walker_degree(&self) -> usize {
        self.degree(self.walker)
    }

    pub fn contains(&self, v: VertexId) -> bool {
        (v as usize) < self.adjacency.len()
    }

    /// Largest depth of a materialized vertex.
    pub fn height(&self) -> u32 {
        self.depth.iter().copied().max().unwrap_or(0)
    }

    pub fn is_lazy(&self) -> bool {
        self.lazy.is_some()
    }

    /// False only for provider vertices whose children are still pending.
    #[inline]
    pub fn is_expanded(&self, v: VertexId) -> bool {
        match &self.lazy {
            Some(l) => !l.pending[v as usize],
            None => true,
        }
    }

    /// True when `v` was supplied by a lazy provider rather than created by
    /// the walk. Finite trees report `false`.
    pub fn is_provided(&self, v: VertexId) -> bool {
        match &self.lazy {
            Some(l) => l.provided[v as usize],
            None => false,
        }
    }

    /// Number of vertices materialized from a lazy provider.
    pub fn materialized(&self) -> usize {
        self.lazy.as_ref().map_or(0, |l| l.materialized)
    }

    pub fn set_materialization_cap(&mut self, cap: usize) {
        if let Some(l) = &mut self.lazy {
            l.cap = cap;
        }
    }

    /// Materializes the children of a pending provider vertex.
    pub fn ensure_expanded(&mut self, v: VertexId) -> Result<()> {
        let Some(lazy) = &self.lazy else {
            return Ok(());
        };
        if !lazy.pending[v as usize] {
            return Ok(());
        }
        let children = lazy.growth.children(self.depth[v as usize]);
        let cap = lazy.cap;
        let needed = lazy.materialized as u64 + children;
        if needed > cap as u64 || self.vertex_count() as u64 + children > VertexId::MAX as u64 {
            return Err(Error::MaterializationCap { cap });
        }
        for _ in 0..children {
            self.push_vertex(v, true);
        }
        let lazy = self.lazy.as_mut().expect("checked above");
        lazy.materialized += children as usize;
        lazy.pending[v as usize] = false;
        Ok(())
    }

    /// Expands every vertex within distance `radius` of `center`, so that
    /// balls of radius `radius` and full degrees inside them are exact.
    pub fn ensure_expanded_within(&mut self, center: VertexId, radius: u32) -> Result<()> {
        if self.lazy.is_none() {
            return Ok(());
        }
        let mut frontier = vec![(center, NO_PARENT, 0u32)];
        while let Some((v, from, d)) = frontier.pop() {
            self.ensure_expanded(v)?;
            if d == radius {
                continue;
            }
            for i in 0..self.degree(v) {
                let u = self.adjacency[v as usize][i];
                if u != from {
                    frontier.push((u, v, d + 1));
                }
            }
        }
        Ok(())
    }

    fn push_vertex(&mut self, at: VertexId, provided: bool) -> VertexId {
        let id = self.adjacency.len() as VertexId;
        self.adjacency[at as usize].push(id);
        let mut own = Neighbors::new();
        own.push(at);
        self.adjacency.push(own);
        self.parent.push(at);
        self.depth.push(self.depth[at as usize] + 1);
        if let Some(l) = &mut self.lazy {
            l.pending.push(provided);
            l.provided.push(provided);
        }
        id
    }

    /// Attaches a fresh leaf to `at` and returns its id.
    pub(crate) fn add_leaf(&mut self, at: VertexId) -> VertexId {
        self.push_vertex(at, false)
    }

    /// Moves the walker to `to` (expanding it if needed) and ticks the clock.
    pub(crate) fn move_walker(&mut self, to: VertexId) -> Result<()> {
        self.walker = to;
        self.time += 1;
        self.ensure_expanded(to)
    }

    /// Places the walker without advancing time.
    pub fn set_walker(&mut self, v: VertexId) -> Result<()> {
        if !self.contains(v) {
            return Err(Error::UnknownVertex(v));
        }
        self.ensure_expanded(v)?;
        self.walker = v;
        Ok(())
    }

    /// The same tree re-anchored at `root` (finite trees only).
    pub fn with_root(&self, root: VertexId) -> Result<Self> {
        if self.lazy.is_some() {
            return Err(invalid("root", "lazy trees cannot be re-rooted"));
        }
        if !self.contains(root) {
            return Err(Error::UnknownVertex(root));
        }
        let (parent, depth) =
            bfs_parents(&self.adjacency, root).expect("tree is connected");
        Ok(Self {
            parent,
            depth,
            root,
            ..self.clone()
        })
    }

    /// Graph distance between two vertices.
    pub fn distance(&self, mut u: VertexId, mut v: VertexId) -> u32 {
        let mut d = 0;
        while self.depth(u) > self.depth(v) {
            u = self.parent[u as usize];
            d += 1;
        }
        while self.depth(v) > self.depth(u) {
            v = self.parent[v as usize];
            d += 1;
        }
        while u != v {
            u = self.parent[u as usize];
            v = self.parent[v as usize];
            d += 2;
        }
        d
    }

    /// Edges as `(min, max)` pairs in lexicographic order.
    pub fn edges(&self) -> Vec<(VertexId, VertexId)> {
        let mut out: Vec<_> = (0..self.vertex_count() as VertexId)
            .filter_map(|v| self.parent(v).map(|p| (p.min(v), p.max(v))))
            .collect();
        out.sort_unstable();
        out
    }

    /// Full structural audit: tree property, parent/depth consistency.
    pub fn audit(&self) -> Result<()> {
        let n = self.vertex_count();
        let half_degree: usize = self.adjacency.iter().map(|a| a.len()).sum();
        if half_degree != 2 * (n - 1) {
            return Err(Error::Invariant(format!(
                "{} edge endpoints for {n} vertices",
                half_degree
            )));
        }
        for (v, nbrs) in self.adjacency.iter().enumerate() {
            for &u in nbrs {
                if !self.adjacency[u as usize].contains(&(v as VertexId)) {
                    return Err(Error::Invariant(format!("edge {v}-{u} is one-sided")));
                }
            }
        }
        let (parent, depth) = bfs_parents(&self.adjacency, self.root)
            .ok_or_else(|| Error::Invariant("tree is disconnected".into()))?;
        if depth != self.depth {
            return Err(Error::Invariant("stored depths disagree with BFS".into()));
        }
        if parent != self.parent {
            return Err(Error::Invariant("stored parents disagree with BFS".into()));
        }
        if !self.contains(self.walker) {
            return Err(Error::Invariant("walker out of range".into()));
        }
        Ok(())
    }
}

/// BFS from `root`; `None` if some vertex is unreachable.
fn bfs_parents(adjacency: &[Neighbors], root: VertexId) -> Option<(Vec<VertexId>, Vec<u32>)> {
    let n = adjacency.len();
    let mut parent = vec![NO_PARENT; n];
    let mut depth = vec![u32::MAX; n];
    depth[root as usize] = 0;
    let mut queue = VecDeque::from([root]);
    let mut seen = 1;
    while let Some(v) = queue.pop_front() {
        for &u in &adjacency[v as usize] {
            if depth[u as usize] == u32::MAX {
                depth[u as usize] = depth[v as usize] + 1;
                parent[u as usize] = v;
                seen += 1;
                queue.push_back(u);
            }
        }
    }
    (seen == n).then_some((parent, depth))
}

/// On-demand neighbor access. Finite trees answer from storage; lazy trees
/// materialize the queried vertex's children first.
pub trait TreeProvider {
    fn neighbors_of(&mut self, v: VertexId) -> Result<&[VertexId]>;
}

impl TreeProvider for TreeState {
    fn neighbors_of(&mut self, v: VertexId) -> Result<&[VertexId]> {
        if !self.contains(v) {
            return Err(Error::UnknownVertex(v));
        }
        self.ensure_expanded(v)?;
        Ok(self.neighbors(v))
    }
}
