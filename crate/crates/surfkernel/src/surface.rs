//! Cellular embeddings of graphs on orientable surfaces, encoded by rotation systems.
//!
//! Edge `i` owns darts `2i` and `2i + 1`. `sigma(d)` is the next dart counterclockwise
//! around the tail of `d`, and `phi = sigma ∘ opp` walks the face lying to the right of
//! each dart (so faces are traced clockwise).

use std::collections::VecDeque;
use std::fmt::Write as _;

use crate::error::{Error, Result};

pub const NONE: usize = usize::MAX;

#[inline]
pub fn opp(d: usize) -> usize {
    d ^ 1
}

#[inline]
pub fn edge_of(d: usize) -> usize {
    d >> 1
}

#[derive(Clone, Debug)]
pub struct Surface {
    sigma: Vec<usize>,
    sigma_inv: Vec<usize>,
    vertex_of: Vec<usize>,
    face_of: Vec<usize>,
    vertex_start: Vec<usize>,
    face_start: Vec<usize>,
    degree: Vec<usize>,
    face_degree: Vec<usize>,
    genus: usize,
}

impl Surface {
    /// Builds a surface from ccw rotation lists, one per vertex. Vertex `i` is `rotations[i]`.
    pub fn from_rotations(rotations: &[Vec<usize>]) -> Result<Self> {
        let total: usize = rotations.iter().map(Vec::len).sum();
        if total == 0 || total % 2 == 1 {
            return Err(Error::Invalid(format!("dart count {total} is not a positive even number")));
        }
        let mut sigma = vec![NONE; total];
        let mut vertex_of = vec![NONE; total];
        let mut vertex_start = Vec::with_capacity(rotations.len());
        for (v, rot) in rotations.iter().enumerate() {
            if rot.is_empty() {
                return Err(Error::Invalid(format!("vertex {v} has no darts")));
            }
            for (i, &d) in rot.iter().enumerate() {
                if d >= total {
                    return Err(Error::Invalid(format!("dart {d} out of range")));
                }
                if vertex_of[d] != NONE {
                    return Err(Error::Invalid(format!("dart {d} reused")));
                }
                vertex_of[d] = v;
                sigma[d] = rot[(i + 1) % rot.len()];
            }
            vertex_start.push(rot[0]);
        }
        Self::assemble(sigma, vertex_of, vertex_start)
    }

    /// Builds a surface from the rotation permutation; vertices are numbered by least dart.
    pub fn from_sigma(sigma: Vec<usize>) -> Result<Self> {
        let n = sigma.len();
        if n == 0 || n % 2 == 1 {
            return Err(Error::Invalid(format!("dart count {n} is not a positive even number")));
        }
        let mut seen = vec![false; n];
        for &s in &sigma {
            if s >= n || seen[s] {
                return Err(Error::Invalid("sigma is not a permutation".into()));
            }
            seen[s] = true;
        }
        let mut vertex_of = vec![NONE; n];
        let mut vertex_start = Vec::new();
        for d in 0..n {
            if vertex_of[d] != NONE {
                continue;
            }
            let v = vertex_start.len();
            vertex_start.push(d);
            let mut x = d;
            loop {
                vertex_of[x] = v;
                x = sigma[x];
                if x == d {
                    break;
                }
            }
        }
        Self::assemble(sigma, vertex_of, vertex_start)
    }

    fn assemble(sigma: Vec<usize>, vertex_of: Vec<usize>, vertex_start: Vec<usize>) -> Result<Self> {
        let n = sigma.len();
        let mut sigma_inv = vec![0; n];
        for (d, &s) in sigma.iter().enumerate() {
            sigma_inv[s] = d;
        }
        let mut degree = vec![0; vertex_start.len()];
        for &v in &vertex_of {
            degree[v] += 1;
        }
        let mut face_of = vec![NONE; n];
        let mut face_start = Vec::new();
        let mut face_degree = Vec::new();
        for d in 0..n {
            if face_of[d] != NONE {
                continue;
            }
            let f = face_start.len();
            face_start.push(d);
            let mut len = 0;
            let mut x = d;
            loop {
                face_of[x] = f;
                len += 1;
                x = sigma[opp(x)];
                if x == d {
                    break;
                }
            }
            face_degree.push(len);
        }
        // connectivity over the group generated by sigma and opp
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(d) = stack.pop() {
            for x in [sigma[d], opp(d)] {
                if !seen[x] {
                    seen[x] = true;
                    count += 1;
                    stack.push(x);
                }
            }
        }
        if count != n {
            return Err(Error::Invalid("graph is disconnected".into()));
        }
        let chi = vertex_start.len() as i64 - (n / 2) as i64 + face_start.len() as i64;
        if chi > 2 || (2 - chi) % 2 != 0 {
            return Err(Error::Invalid(format!("Euler characteristic {chi} gives a non-integer genus")));
        }
        Ok(Surface {
            sigma,
            sigma_inv,
            vertex_of,
            face_of,
            vertex_start,
            face_start,
            degree,
            face_degree,
            genus: ((2 - chi) / 2) as usize,
        })
    }

    pub fn num_darts(&self) -> usize {
        self.sigma.len()
    }
    pub fn num_edges(&self) -> usize {
        self.sigma.len() / 2
    }
    pub fn num_vertices(&self) -> usize {
        self.vertex_start.len()
    }
    pub fn num_faces(&self) -> usize {
        self.face_start.len()
    }
    pub fn genus(&self) -> usize {
        self.genus
    }
    #[inline]
    pub fn sigma(&self, d: usize) -> usize {
        self.sigma[d]
    }
    #[inline]
    pub fn sigma_inv(&self, d: usize) -> usize {
        self.sigma_inv[d]
    }
    #[inline]
    pub fn phi(&self, d: usize) -> usize {
        self.sigma[opp(d)]
    }
    #[inline]
    pub fn phi_inv(&self, d: usize) -> usize {
        opp(self.sigma_inv[d])
    }
    #[inline]
    pub fn tail(&self, d: usize) -> usize {
        self.vertex_of[d]
    }
    #[inline]
    pub fn head(&self, d: usize) -> usize {
        self.vertex_of[opp(d)]
    }
    /// Face to the right of `d`.
    #[inline]
    pub fn face(&self, d: usize) -> usize {
        self.face_of[d]
    }
    pub fn degree(&self, v: usize) -> usize {
        self.degree[v]
    }
    pub fn face_degree(&self, f: usize) -> usize {
        self.face_degree[f]
    }
    pub fn vertex_start(&self, v: usize) -> usize {
        self.vertex_start[v]
    }
    pub fn sigma_slice(&self) -> &[usize] {
        &self.sigma
    }

    pub fn rotation(&self, v: usize) -> Vec<usize> {
        let start = self.vertex_start[v];
        let mut out = Vec::with_capacity(self.degree[v]);
        let mut x = start;
        loop {
            out.push(x);
            x = self.sigma[x];
            if x == start {
                return out;
            }
        }
    }

    /// The phi-orbit of face `f`, starting at its least dart.
    pub fn face_walk(&self, f: usize) -> Vec<usize> {
        let start = self.face_start[f];
        let mut out = Vec::with_capacity(self.face_degree[f]);
        let mut x = start;
        loop {
            out.push(x);
            x = self.phi(x);
            if x == start {
                return out;
            }
        }
    }

    pub fn rotations(&self) -> Vec<Vec<usize>> {
        (0..self.num_vertices()).map(|v| self.rotation(v)).collect()
    }

    /// Dual surface: vertex `f` of the dual is face `f`; dual dart `d` crosses edge `d`
    /// from its right face to its left face.
    pub fn dual(&self) -> Surface {
        let sigma = (0..self.num_darts()).map(|d| self.phi_inv(d)).collect();
        Surface::from_sigma(sigma).expect("dual of a valid surface is valid")
    }

    pub fn to_srf(&self) -> String {
        let mut s = String::new();
        writeln!(s, "surface {}", self.num_edges()).unwrap();
        for v in 0..self.num_vertices() {
            write!(s, "{v}:").unwrap();
            for d in self.rotation(v) {
                write!(s, " {d}").unwrap();
            }
            s.push('\n');
        }
        s
    }

    pub fn tree_cotree(&self) -> TreeCotree {
        let e = self.num_edges();
        let mut class = vec![EdgeClass::Leftover; e];
        let sorted: Vec<Vec<usize>> = (0..self.num_vertices())
            .map(|v| {
                let mut r = self.rotation(v);
                r.sort_unstable();
                r
            })
            .collect();
        let mut visited = vec![false; self.num_vertices()];
        visited[0] = true;
        let mut queue = VecDeque::from([0]);
        while let Some(u) = queue.pop_front() {
            for &d in &sorted[u] {
                let w = self.head(d);
                if !visited[w] {
                    visited[w] = true;
                    class[edge_of(d)] = EdgeClass::Tree;
                    queue.push_back(w);
                }
            }
        }
        let face_sorted: Vec<Vec<usize>> = (0..self.num_faces())
            .map(|f| {
                let mut w = self.face_walk(f);
                w.sort_unstable();
                w
            })
            .collect();
        let mut fvisited = vec![false; self.num_faces()];
        fvisited[0] = true;
        let mut queue = VecDeque::from([0]);
        while let Some(f) = queue.pop_front() {
            for &d in &face_sorted[f] {
                if class[edge_of(d)] == EdgeClass::Tree {
                    continue;
                }
                let h = self.face(opp(d));
                if !fvisited[h] {
                    fvisited[h] = true;
                    class[edge_of(d)] = EdgeClass::Cotree;
                    queue.push_back(h);
                }
            }
        }
        TreeCotree { class }
    }

    /// Contracts the tree and deletes the cotree, leaving one vertex and one face.
    pub fn reduce(&self, tc: &TreeCotree) -> Result<Reduced> {
        if self.genus == 0 {
            return Err(Error::LowGenus(0));
        }
        let in_tree = |d: usize| tc.class[edge_of(d)] == EdgeClass::Tree;
        let start = (0..self.num_darts())
            .find(|&d| !in_tree(d))
            .expect("positive genus implies a non-tree edge");
        // ccw order of non-tree darts around the contracted tree
        let mut order = Vec::with_capacity(self.num_darts());
        let mut pos = vec![NONE; self.num_darts()];
        let mut d = start;
        loop {
            pos[d] = order.len();
            order.push(d);
            let mut s = self.sigma(d);
            while in_tree(s) {
                s = self.sigma(opp(s));
            }
            d = s;
            if d == start {
                break;
            }
        }
        let mut orig_to_edge = vec![NONE; self.num_edges()];
        let mut edge_to_orig = Vec::new();
        for (e, c) in tc.class.iter().enumerate() {
            if *c == EdgeClass::Leftover {
                orig_to_edge[e] = edge_to_orig.len();
                edge_to_orig.push(e);
            }
        }
        let rot: Vec<usize> = order
            .iter()
            .filter(|&&d| tc.class[edge_of(d)] == EdgeClass::Leftover)
            .map(|&d| 2 * orig_to_edge[edge_of(d)] + (d & 1))
            .collect();
        let surface = Surface::from_rotations(&[rot])?;
        if surface.num_faces() != 1 || surface.num_edges() != 2 * self.genus {
            return Err(Error::Invalid("tree-cotree decomposition does not reduce to one face".into()));
        }
        let walk = surface.face_walk(0);
        let boundary = walk.iter().rev().map(|&d| opp(d)).collect();
        Ok(Reduced { surface, boundary, edge_to_orig, orig_to_edge, order, order_pos: pos })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdgeClass {
    Tree,
    Cotree,
    Leftover,
}

#[derive(Clone, Debug)]
pub struct TreeCotree {
    pub class: Vec<EdgeClass>,
}

impl TreeCotree {
    pub fn edges(&self, c: EdgeClass) -> Vec<usize> {
        (0..self.class.len()).filter(|&e| self.class[e] == c).collect()
    }
}

/// One vertex, one face, `2g` loops.
#[derive(Clone, Debug)]
pub struct Reduced {
    pub surface: Surface,
    /// Facial walk keeping the face on its left.
    pub boundary: Vec<usize>,
    pub edge_to_orig: Vec<usize>,
    /// `NONE` for edges outside the leftover set.
    pub orig_to_edge: Vec<usize>,
    /// Darts of the original graph outside the tree, ccw around the contracted tree.
    pub order: Vec<usize>,
    pub order_pos: Vec<usize>,
}

impl Reduced {
    pub fn to_reduced_dart(&self, d: usize) -> usize {
        let e = self.orig_to_edge[edge_of(d)];
        debug_assert_ne!(e, NONE);
        2 * e + (d & 1)
    }
}

#[derive(Clone, Debug)]
pub struct ParsedSrf {
    pub surface: Surface,
    /// `(line, vertex, d1, d3)` entries of the optional `pairing` section.
    pub pairing: Option<Vec<(usize, usize, usize, usize)>>,
}

pub fn parse_srf(text: &str) -> Result<ParsedSrf> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());
    let (hline, header) = lines.next().ok_or(Error::Parse { line: 1, msg: "empty input".into() })?;
    let edges = match header.split_whitespace().collect::<Vec<_>>().as_slice() {
        ["surface", e] => e
            .parse::<usize>()
            .map_err(|_| Error::Parse { line: hline, msg: format!("bad edge count '{e}'") })?,
        _ => return Err(Error::Parse { line: hline, msg: "expected 'surface <E>'".into() }),
    };
    let mut rotations: Vec<Vec<usize>> = Vec::new();
    let mut used = vec![0usize; 2 * edges];
    let mut pairing: Option<Vec<(usize, usize, usize, usize)>> = None;
    let mut last_line = hline;
    for (ln, line) in lines {
        last_line = ln;
        if line == "pairing" {
            if pairing.is_some() {
                return Err(Error::Parse { line: ln, msg: "duplicate pairing section".into() });
            }
            pairing = Some(Vec::new());
            continue;
        }
        let (label, rest) = line
            .split_once(':')
            .ok_or(Error::Parse { line: ln, msg: "expected '<index>: <darts>'".into() })?;
        let idx: usize = label
            .trim()
            .parse()
            .map_err(|_| Error::Parse { line: ln, msg: format!("bad index '{}'", label.trim()) })?;
        let mut darts = Vec::new();
        for tok in rest.split_whitespace() {
            let d: usize = tok
                .parse()
                .map_err(|_| Error::Parse { line: ln, msg: format!("bad dart '{tok}'") })?;
            if d >= 2 * edges {
                return Err(Error::Parse { line: ln, msg: format!("dart {d} out of range") });
            }
            darts.push(d);
        }
        match pairing.as_mut() {
            None => {
                if idx != rotations.len() {
                    return Err(Error::Parse {
                        line: ln,
                        msg: format!("expected vertex {} got {idx}", rotations.len()),
                    });
                }
                if darts.is_empty() {
                    return Err(Error::Parse { line: ln, msg: "vertex without darts".into() });
                }
                for &d in &darts {
                    if used[d] != 0 {
                        return Err(Error::Parse {
                            line: ln,
                            msg: format!("dart {d} reused (first on line {})", used[d]),
                        });
                    }
                    used[d] = ln;
                }
                rotations.push(darts);
            }
            Some(p) => {
                if darts.len() != 2 {
                    return Err(Error::Parse { line: ln, msg: "pairing lines name two darts".into() });
                }
                p.push((ln, idx, darts[0], darts[1]));
            }
        }
    }
    if let Some(d) = used.iter().position(|&u| u == 0) {
        return Err(Error::Parse { line: last_line, msg: format!("dart {d} missing") });
    }
    let surface = Surface::from_rotations(&rotations)
        .map_err(|e| Error::Parse { line: hline, msg: e.to_string() })?;
    Ok(ParsedSrf { surface, pairing })
}

/// Orientation-preserving isomorphism test by rooted propagation.
pub fn isomorphic(a: &Surface, b: &Surface) -> bool {
    if a.num_darts() != b.num_darts()
        || a.num_vertices() != b.num_vertices()
        || a.num_faces() != b.num_faces()
    {
        return false;
    }
    let n = a.num_darts();
    'root: for r in 0..n {
        let mut map = vec![NONE; n];
        let mut inv = vec![NONE; n];
        map[0] = r;
        inv[r] = 0;
        let mut stack = vec![0];
        while let Some(d) = stack.pop() {
            let img = map[d];
            for (x, y) in [(a.sigma(d), b.sigma(img)), (opp(d), opp(img))] {
                if map[x] == NONE {
                    if inv[y] != NONE {
                        continue 'root;
                    }
                    map[x] = y;
                    inv[y] = x;
                    stack.push(x);
                } else if map[x] != y {
                    continue 'root;
                }
            }
        }
        return true;
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn genus2() -> Surface {
        crate::fixtures::standard(2)
    }

    #[test]
    fn torus_and_genus_two() {
        let t = Surface::from_rotations(&[vec![0, 2, 1, 3]]).unwrap();
        assert_eq!((t.num_vertices(), t.num_edges(), t.num_faces(), t.genus()), (1, 2, 1, 1));
        let s = genus2();
        assert_eq!((s.num_vertices(), s.num_edges(), s.num_faces(), s.genus()), (1, 4, 1, 2));
    }

    #[test]
    fn parse_errors_carry_lines() {
        let err = parse_srf("surface 1\n0: 0 1\n1: 1\n").unwrap_err();
        assert_eq!(err, Error::Parse { line: 3, msg: "dart 1 reused (first on line 2)".into() });
        assert!(matches!(parse_srf("surface 2\n0: 0 1\n1: 2 3\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_srf("surfac 2\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_srf("surface 1\n0: 0 x\n"), Err(Error::Parse { line: 2, .. })));
    }

    #[test]
    fn srf_roundtrip_with_comments() {
        let text = "# genus two\nsurface 4\n0: 0 2 1 3 4 6 5 7 # one vertex\n";
        let p = parse_srf(text).unwrap();
        assert_eq!(p.surface.genus(), 2);
        assert!(isomorphic(&p.surface, &parse_srf(&p.surface.to_srf()).unwrap().surface));
    }

    #[test]
    fn dual_of_dual_is_opp_relabeling() {
        let s = genus2();
        let dd = s.dual().dual();
        for d in 0..s.num_darts() {
            assert_eq!(dd.sigma(d), opp(s.sigma(opp(d))));
        }
        assert!(isomorphic(&s, &dd));
    }

    #[test]
    fn reduce_single_vertex() {
        let s = genus2();
        let tc = s.tree_cotree();
        assert_eq!(tc.edges(EdgeClass::Leftover).len(), 4);
        let r = s.reduce(&tc).unwrap();
        assert_eq!(r.boundary.len(), 8);
        let mut b = r.boundary.clone();
        b.sort_unstable();
        assert_eq!(b, (0..8).collect::<Vec<_>>());
    }
}
