//! Systems of closed curves in general position, viewed as 4-regular embedded graphs whose
//! transverse pairing joins opposite darts in each rotation.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::surface::{edge_of, opp, parse_srf, Surface, NONE};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Choice {
    /// joins (e1, e2) and (e3, e4)
    A,
    /// joins (e2, e3) and (e4, e1)
    B,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Provenance {
    Monogon,
    BigonCorner,
    /// replay of a user-supplied minor operation
    Minor,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FaceColor {
    /// face of the medial around a vertex of the underlying graph
    Vertex,
    /// face of the medial inside a face of the underlying graph
    Face,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmoothingRecord {
    pub vertex: usize,
    pub choice: Choice,
    pub provenance: Provenance,
    pub origin: usize,
}

pub type SmoothingTrace = Vec<SmoothingRecord>;

#[derive(Clone, Debug)]
pub struct CurveSystem {
    pub surface: Surface,
    succ: Vec<usize>,
    curves: Vec<Vec<usize>>,
    curve_of: Vec<usize>,
    /// Vertex of the root system each current vertex descends from.
    pub vertex_origin: Vec<usize>,
    /// For each current edge, the root-system dart walk that dart `2e` stands for.
    pub edge_origin: Vec<Vec<usize>>,
    /// Color of the face to the right of each dart, when the system is a medial.
    pub dart_color: Option<Vec<FaceColor>>,
}

/// How darts of the system before a smoothing map to darts after it.
#[derive(Clone, Debug)]
pub struct SmoothMap {
    pub dart_map: Vec<usize>,
    pub vertex_map: Vec<usize>,
}

impl CurveSystem {
    /// Curve decomposition of a 4-regular surface by straight-through pairing.
    pub fn decompose(surface: Surface) -> Result<Self> {
        let ne = surface.num_edges();
        let nv = surface.num_vertices();
        let mut cs = CurveSystem {
            surface,
            succ: Vec::new(),
            curves: Vec::new(),
            curve_of: Vec::new(),
            vertex_origin: (0..nv).collect(),
            edge_origin: (0..ne).map(|e| vec![2 * e]).collect(),
            dart_color: None,
        };
        cs.rebuild()?;
        Ok(cs)
    }

    fn rebuild(&mut self) -> Result<()> {
        let s = &self.surface;
        for v in 0..s.num_vertices() {
            if s.degree(v) != 4 {
                return Err(Error::Invalid(format!("vertex {v} has degree {}", s.degree(v))));
            }
        }
        let n = s.num_darts();
        self.succ = (0..n).map(|d| s.sigma(s.sigma(opp(d)))).collect();
        self.curve_of = vec![NONE; n];
        self.curves.clear();
        for d in 0..n {
            if self.curve_of[d] != NONE {
                continue;
            }
            let c = self.curves.len();
            let mut walk = Vec::new();
            let mut x = d;
            loop {
                self.curve_of[x] = c;
                walk.push(x);
                x = self.succ[x];
                if x == d {
                    break;
                }
            }
            self.curves.push(walk);
        }
        Ok(())
    }

    pub fn from_srf(text: &str) -> Result<Self> {
        let p = parse_srf(text)?;
        let cs = Self::decompose(p.surface).map_err(|e| Error::Parse { line: 1, msg: e.to_string() })?;
        if let Some(pairs) = p.pairing {
            let mut seen = vec![false; cs.num_vertices()];
            for (line, v, a, b) in pairs {
                if v >= cs.num_vertices() || seen[v] {
                    return Err(Error::Parse { line, msg: format!("bad pairing vertex {v}") });
                }
                seen[v] = true;
                let s = &cs.surface;
                if s.tail(a) != v || s.tail(b) != v || s.sigma(s.sigma(a)) != b {
                    return Err(Error::Parse {
                        line,
                        msg: format!("pair ({a}, {b}) is not transverse at vertex {v}"),
                    });
                }
            }
            if let Some(v) = seen.iter().position(|&x| !x) {
                return Err(Error::Parse { line: 1, msg: format!("vertex {v} has no pairing line") });
            }
        }
        Ok(cs)
    }

    pub fn to_srf(&self) -> String {
        let mut s = self.surface.to_srf();
        s.push_str("pairing\n");
        for v in 0..self.num_vertices() {
            let r = self.surface.rotation(v);
            writeln!(s, "{v}: {} {}", r[0], r[2]).unwrap();
        }
        s
    }

    pub fn num_vertices(&self) -> usize {
        self.surface.num_vertices()
    }
    #[inline]
    pub fn succ(&self, d: usize) -> usize {
        self.succ[d]
    }
    /// Curves as dart cycles, ordered by least dart, each starting at its least dart.
    pub fn curves(&self) -> &[Vec<usize>] {
        &self.curves
    }
    pub fn curve_of(&self, d: usize) -> usize {
        self.curve_of[d]
    }

    pub fn walk_along(&self, d: usize, len: usize) -> Vec<usize> {
        let mut out = Vec::with_capacity(len);
        let mut x = d;
        for _ in 0..len {
            out.push(x);
            x = self.succ[x];
        }
        out
    }

    /// Faces of degree one, as `(vertex, loop dart)`.
    pub fn find_empty_monogons(&self) -> Vec<(usize, usize)> {
        let s = &self.surface;
        (0..s.num_darts()).filter(|&d| s.phi(d) == d).map(|d| (s.tail(d), d)).collect()
    }

    /// True when the induced graph is connected and cellular of genus `genus`.
    pub fn is_filling(&self, genus: usize) -> bool {
        self.surface.genus() == genus
    }

    /// Ccw rotation at `v` starting at its least dart.
    pub fn min_rotation(&self, v: usize) -> [usize; 4] {
        let s = &self.surface;
        let r = s.rotation(v);
        let k = (0..4).min_by_key(|&i| r[i]).unwrap();
        [r[k], r[(k + 1) % 4], r[(k + 2) % 4], r[(k + 3) % 4]]
    }

    /// The choice at `v` that keeps darts `a` and `b` (adjacent in the rotation) apart.
    pub fn choice_separating(&self, v: usize, a: usize, b: usize) -> Choice {
        let e = self.min_rotation(v);
        let i = e.iter().position(|&x| x == a).expect("dart at vertex");
        let j = e.iter().position(|&x| x == b).expect("dart at vertex");
        let lo = i.min(j);
        let hi = i.max(j);
        // A pairs positions {0,1} and {2,3}
        if (lo, hi) == (0, 1) || (lo, hi) == (2, 3) {
            Choice::B
        } else {
            Choice::A
        }
    }

    /// Colors of the two faces merged by smoothing `v` with `choice`.
    pub fn merged_color(&self, v: usize, choice: Choice) -> Option<FaceColor> {
        let colors = self.dart_color.as_ref()?;
        let e = self.min_rotation(v);
        // the face between e_i and e_{i+1} ccw lies to the right of e_{i+1}
        let right = match choice {
            Choice::A => e[2],
            Choice::B => e[1],
        };
        Some(colors[right])
    }

    /// Removes `v` and reconnects its four strands per `choice`.
    pub fn smooth(&self, v: usize, choice: Choice) -> Result<(CurveSystem, SmoothMap)> {
        let s = &self.surface;
        let e = self.min_rotation(v);
        let partner = |d: usize| -> usize {
            let i = e.iter().position(|&x| x == d).unwrap();
            let j = match (choice, i) {
                (Choice::A, 0) => 1,
                (Choice::A, 1) => 0,
                (Choice::A, 2) => 3,
                (Choice::A, 3) => 2,
                (Choice::B, 0) => 3,
                (Choice::B, 3) => 0,
                (Choice::B, 1) => 2,
                (Choice::B, _) => 1,
                _ => unreachable!(),
            };
            e[j]
        };
        let n = s.num_darts();
        let mut dart_map = vec![NONE; n];
        let mut new_origin: Vec<Vec<usize>> = Vec::new();
        for start in 0..n {
            if s.tail(start) == v || dart_map[start] != NONE {
                continue;
            }
            let k = new_origin.len();
            let mut chain = vec![start];
            let mut cur = start;
            loop {
                let o = opp(cur);
                if s.tail(o) == v {
                    cur = partner(o);
                    if cur == start || chain.len() > 8 {
                        return Err(Error::Smoothing("strand closes without a vertex".into()));
                    }
                    chain.push(cur);
                } else {
                    break;
                }
            }
            let mut walk = Vec::new();
            for &c in &chain {
                if dart_map[c] != NONE || dart_map[opp(c)] != NONE {
                    return Err(Error::Smoothing("strand revisits an edge".into()));
                }
                dart_map[c] = 2 * k;
                dart_map[opp(c)] = 2 * k + 1;
                walk.extend(self.origin_of_dart(c));
            }
            new_origin.push(walk);
        }
        if dart_map.contains(&NONE) {
            return Err(Error::Smoothing("a closed strand avoids every vertex".into()));
        }
        let mut vertex_map = vec![NONE; s.num_vertices()];
        let mut rotations = Vec::with_capacity(s.num_vertices() - 1);
        let mut vertex_origin = Vec::with_capacity(s.num_vertices() - 1);
        for u in 0..s.num_vertices() {
            if u == v {
                continue;
            }
            vertex_map[u] = rotations.len();
            rotations.push(s.rotation(u).into_iter().map(|d| dart_map[d]).collect::<Vec<_>>());
            vertex_origin.push(self.vertex_origin[u]);
        }
        if rotations.is_empty() {
            return Err(Error::Smoothing("smoothing the last vertex".into()));
        }
        let surface = Surface::from_rotations(&rotations)?;
        let dart_color = self.dart_color.as_ref().map(|colors| {
            let mut out = vec![FaceColor::Vertex; surface.num_darts()];
            for d in 0..n {
                if s.tail(d) != v {
                    out[dart_map[d]] = colors[d];
                }
            }
            out
        });
        let mut cs = CurveSystem {
            surface,
            succ: Vec::new(),
            curves: Vec::new(),
            curve_of: Vec::new(),
            vertex_origin,
            edge_origin: new_origin,
            dart_color,
        };
        cs.rebuild()?;
        Ok((cs, SmoothMap { dart_map, vertex_map }))
    }

    /// Root-system walk represented by the current dart `d`.
    pub fn origin_of_dart(&self, d: usize) -> Vec<usize> {
        let w = &self.edge_origin[edge_of(d)];
        if d & 1 == 0 {
            w.clone()
        } else {
            w.iter().rev().map(|&x| opp(x)).collect()
        }
    }

    /// Root-system walk represented by a walk of current darts.
    pub fn lift_walk(&self, walk: &[usize]) -> Vec<usize> {
        walk.iter().flat_map(|&d| self.origin_of_dart(d)).collect()
    }

    /// Replays a trace recorded against this system.
    pub fn replay(&self, trace: &[SmoothingRecord]) -> Result<CurveSystem> {
        let mut cur = self.clone();
        for r in trace {
            cur = cur.smooth(r.vertex, r.choice)?.0;
        }
        Ok(cur)
    }
}
