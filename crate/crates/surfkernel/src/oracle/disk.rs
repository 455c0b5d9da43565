//! Breadth-first unfolding of the system of quads into a planar disk of quads.
//!
//! Quads are glued one at a time around a vertex, extending the arc of quads already
//! present there. A vertex is closed once its arc holds all `4g` quads, at which point
//! its first and last edges coincide. The embedding is purely combinatorial: each disk
//! vertex keeps its contiguous arc of corners, and a quad that does not extend an arc
//! is reported as a failure of the disk property.

use std::collections::{BTreeMap, VecDeque};

use crate::error::{Error, Result};
use crate::quad::QuadSystem;
use crate::surface::opp;

#[derive(Clone, Debug)]
pub struct UnfoldedDisk<'q> {
    q: &'q QuadSystem,
    proj: Vec<usize>,
    nbr: Vec<BTreeMap<usize, usize>>,
    /// First corner index and number of consecutive corners covered by quads.
    arc: Vec<Option<(usize, usize)>>,
    quads: Vec<[usize; 4]>,
    dist: Vec<usize>,
    radius: usize,
}

impl<'q> UnfoldedDisk<'q> {
    /// The disk holding every lift from the base vertex of a walk of length at most
    /// `radius`, or an error once it would exceed `max_vertices`.
    pub fn unfold(q: &'q QuadSystem, base: usize, radius: usize, max_vertices: usize) -> Result<Self> {
        let mut disk = UnfoldedDisk {
            q,
            proj: vec![base],
            nbr: vec![BTreeMap::new()],
            arc: vec![None],
            quads: Vec::new(),
            dist: vec![0],
            radius: 0,
        };
        for level in 0..radius {
            let layer: Vec<usize> = (0..disk.num_vertices()).filter(|&u| disk.dist[u] == level).collect();
            for u in layer {
                disk.close(u, max_vertices)?;
            }
            disk.recompute_distances();
            disk.radius = level + 1;
        }
        disk.assert_invariants();
        Ok(disk)
    }

    pub fn num_vertices(&self) -> usize {
        self.proj.len()
    }
    pub fn num_quads(&self) -> usize {
        self.quads.len()
    }
    pub fn radius(&self) -> usize {
        self.radius
    }
    pub fn projection(&self, u: usize) -> usize {
        self.proj[u]
    }
    pub fn distance(&self, u: usize) -> usize {
        self.dist[u]
    }
    pub fn is_closed(&self, u: usize) -> bool {
        matches!(self.arc[u], Some((_, len)) if len == self.q.degree())
    }
    pub fn num_interior(&self) -> usize {
        (0..self.num_vertices()).filter(|&u| self.is_closed(u)).count()
    }
    pub fn quads(&self) -> &[[usize; 4]] {
        &self.quads
    }
    pub fn neighbor(&self, u: usize, d: usize) -> Option<usize> {
        self.nbr[u].get(&d).copied()
    }

    /// Disk vertices visited by a walk of the system of quads from the base, or `None`
    /// once the walk leaves the disk.
    pub fn trace(&self, walk: &[usize]) -> Option<Vec<usize>> {
        let mut cur = 0;
        let mut out = vec![cur];
        for &d in walk {
            cur = self.neighbor(cur, d)?;
            out.push(cur);
        }
        Some(out)
    }

    /// First repeated vertex of the lift of a walk from the base, as `(k, k')` with least
    /// `k'` and then least `k`.
    pub fn first_repeat(&self, walk: &[usize]) -> Result<Option<(usize, usize)>> {
        let verts = self
            .trace(walk)
            .ok_or_else(|| Error::Capacity(format!("walk leaves the disk of radius {}", self.radius)))?;
        let mut seen: BTreeMap<usize, usize> = BTreeMap::new();
        for (k2, &u) in verts.iter().enumerate() {
            if let Some(&k) = seen.get(&u) {
                return Ok(Some((k, k2)));
            }
            seen.insert(u, k2);
        }
        Ok(None)
    }

    fn new_vertex(&mut self, p: usize, dist: usize) -> usize {
        self.proj.push(p);
        self.nbr.push(BTreeMap::new());
        self.arc.push(None);
        self.dist.push(dist);
        self.proj.len() - 1
    }

    fn close(&mut self, u: usize, max_vertices: usize) -> Result<()> {
        let deg = self.q.degree();
        while !self.is_closed(u) {
            let corner = match self.arc[u] {
                None => 0,
                Some((lo, len)) => (lo + len) % deg,
            };
            let c0 = self.q.dart_at(self.proj[u], corner as i64 + 1);
            self.add_quad(u, c0)?;
            if self.num_vertices() > max_vertices {
                return Err(Error::Capacity(format!("disk exceeds {max_vertices} vertices")));
            }
        }
        Ok(())
    }

    /// Glues the quad to the right of `c0` at the disk vertex `u` lifting its tail.
    fn add_quad(&mut self, u: usize, c0: usize) -> Result<()> {
        let s = &self.q.surface;
        let mut c = [c0; 4];
        for i in 1..4 {
            c[i] = s.phi(c[i - 1]);
        }
        debug_assert_eq!(s.phi(c[3]), c0);
        let mut v: [Option<usize>; 4] = [Some(u), None, None, None];
        loop {
            let mut progress = false;
            for i in 0..4 {
                let j = (i + 1) % 4;
                if let (Some(a), None) = (v[i], v[j]) {
                    if let Some(b) = self.neighbor(a, c[i]) {
                        v[j] = Some(b);
                        progress = true;
                    }
                }
                if let (None, Some(b)) = (v[i], v[j]) {
                    if let Some(a) = self.neighbor(b, opp(c[i])) {
                        v[i] = Some(a);
                        progress = true;
                    }
                }
            }
            if !progress {
                break;
            }
        }
        let base_dist = self.dist[u];
        let v: Vec<usize> = (0..4)
            .map(|i| match v[i] {
                Some(x) => x,
                None => {
                    let p = s.tail(c[i]);
                    self.new_vertex(p, base_dist + if i == 2 { 2 } else { 1 })
                }
            })
            .collect();
        for i in 0..4 {
            let (a, b) = (v[i], v[(i + 1) % 4]);
            for (x, d, y) in [(a, c[i], b), (b, opp(c[i]), a)] {
                match self.nbr[x].insert(d, y) {
                    Some(old) if old != y => {
                        return Err(Error::Invalid(format!("disk vertex {x} has two edges along dart {d}")));
                    }
                    _ => {}
                }
            }
        }
        let deg = self.q.degree();
        for i in 0..4 {
            let corner = self.q.idx(opp(c[(i + 3) % 4]));
            let x = v[i];
            self.arc[x] = Some(match self.arc[x] {
                None => (corner, 1),
                Some((lo, len)) if len < deg && corner == (lo + len) % deg => (lo, len + 1),
                Some((lo, len)) if len < deg && corner == (lo + deg - 1) % deg => (corner, len + 1),
                Some(_) => {
                    return Err(Error::Invalid(format!("quad at disk vertex {x} does not extend its arc")));
                }
            });
        }
        self.quads.push([v[0], v[1], v[2], v[3]]);
        Ok(())
    }

    fn recompute_distances(&mut self) {
        let mut dist = vec![usize::MAX; self.num_vertices()];
        dist[0] = 0;
        let mut queue = VecDeque::from([0]);
        while let Some(u) = queue.pop_front() {
            for &w in self.nbr[u].values() {
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        self.dist = dist;
    }

    pub fn assert_invariants(&self) {
        let deg = self.q.degree();
        for u in 0..self.num_vertices() {
            if self.is_closed(u) {
                assert_eq!(self.nbr[u].len(), deg, "interior vertex {u} has degree 4g");
            }
            for (&d, &w) in &self.nbr[u] {
                assert_eq!(self.q.surface.tail(d), self.proj[u]);
                assert_eq!(self.neighbor(w, opp(d)), Some(u));
            }
        }
        // Euler characteristic of a disk
        let edges: usize = self.nbr.iter().map(|m| m.len()).sum::<usize>() / 2;
        assert_eq!(self.num_vertices() as i64 - edges as i64 + self.num_quads() as i64, 1);
    }
}
