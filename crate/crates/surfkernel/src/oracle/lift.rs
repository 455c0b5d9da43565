//! Ground truth for lifts of walks to the universal cover, with lifted vertices named
//! by group elements.

use std::collections::{HashMap, VecDeque};

use super::dehn::{ElementTable, Presentation, Word};
use crate::error::{Error, Result};
use crate::quad::check_walk;
use crate::surface::{edge_of, opp, Surface};

/// Reduced words of the lifted vertices `0..=len` of a walk.
fn prefix_elements(pres: &Presentation, walk: &[usize]) -> Vec<Word> {
    let mut out = Vec::with_capacity(walk.len() + 1);
    let mut cur: Word = Vec::new();
    out.push(cur.clone());
    for &d in walk {
        cur.extend_from_slice(pres.dart_word(d));
        cur = pres.reduce(&cur);
        out.push(cur.clone());
    }
    out
}

/// First repeated lifted vertex of the walk, as the pair `(k, k')` with least `k'` and
/// then least `k`; `None` when the lift is simple.
pub fn oracle_simple_lift(s: &Surface, pres: &Presentation, walk: &[usize]) -> Result<Option<(usize, usize)>> {
    check_walk(s, walk, false)?;
    let start = walk.first().map_or(0, |&d| s.tail(d));
    let verts: Vec<usize> = std::iter::once(start).chain(walk.iter().map(|&d| s.head(d))).collect();
    let elems = prefix_elements(pres, walk);
    for k2 in 1..verts.len() {
        for k in 0..k2 {
            if verts[k] == verts[k2] && pres.equal(&elems[k], &elems[k2]) {
                return Ok(Some((k, k2)));
            }
        }
    }
    Ok(None)
}

/// Whether the closed walk is contractible.
pub fn oracle_contractible(s: &Surface, pres: &Presentation, walk: &[usize]) -> Result<bool> {
    check_walk(s, walk, true)?;
    Ok(pres.is_trivial(&pres.walk_word(walk)))
}

struct Faces<'a> {
    s: &'a Surface,
    pres: &'a Presentation,
    /// Word from the anchor of the face of each dart to its tail.
    from_anchor: Vec<Word>,
    table: ElementTable,
    elems: Vec<Word>,
    face_of: Vec<usize>,
}

impl<'a> Faces<'a> {
    fn new(s: &'a Surface, pres: &'a Presentation) -> Self {
        let mut from_anchor = vec![Vec::new(); s.num_darts()];
        for f in 0..s.num_faces() {
            let mut w: Word = Vec::new();
            for &d in &s.face_walk(f) {
                from_anchor[d] = pres.reduce(&w);
                w.extend_from_slice(pres.dart_word(d));
            }
        }
        Faces { s, pres, from_anchor, table: ElementTable::default(), elems: Vec::new(), face_of: Vec::new() }
    }

    /// Id of the lifted face to the right of the lift of `d` whose tail is `tail`.
    fn right_of(&mut self, d: usize, tail: &[usize]) -> (usize, bool) {
        let mut w = tail.to_vec();
        w.extend(super::dehn::inverse(&self.from_anchor[d]));
        let anchor = self.pres.reduce(&w);
        let f = self.s.face(d);
        let (id, new) = self.table.intern(self.pres, f, &anchor);
        if new {
            self.elems.push(anchor);
            self.face_of.push(f);
        }
        (id, new)
    }
}

/// Signed area of a closed contractible walk: the sum over the faces of the lifted graph
/// of the winding number of the lifted walk around them.
///
/// Lifted faces are grouped into the regions cut out by the lifted edges of nonzero net
/// traversal; across such an edge the winding number jumps by its net count. Regions are
/// explored up to `cap` faces each. The unbounded region always hits the cap; when all
/// capped regions get the same winding number they are given 0, which is exact, and the
/// result is `None` otherwise.
pub fn oracle_signed_area(s: &Surface, pres: &Presentation, walk: &[usize], cap: usize) -> Result<Option<i64>> {
    check_walk(s, walk, true)?;
    let elems = prefix_elements(pres, walk);
    if !elems[walk.len()].is_empty() {
        return Err(Error::NotContractible);
    }
    // net traversal of each lifted edge, keyed by the tail of its even dart
    let mut edge_table = ElementTable::default();
    let mut net: HashMap<usize, i64> = HashMap::new();
    let mut wall_darts: Vec<(usize, usize)> = Vec::new();
    for (k, &d) in walk.iter().enumerate() {
        let (even_tail, sign) = if d & 1 == 0 { (&elems[k], 1) } else { (&elems[k + 1], -1) };
        let (id, new) = edge_table.intern(pres, edge_of(d), even_tail);
        if new {
            wall_darts.push((2 * edge_of(d), k + (d & 1)));
        }
        *net.entry(id).or_default() += sign;
    }
    let is_wall = |table: &mut ElementTable, e: usize, tail: &[usize]| -> Option<i64> {
        let (id, new) = table.intern(pres, e, tail);
        if new {
            None
        } else {
            net.get(&id).copied().filter(|&n| n != 0)
        }
    };

    let mut faces = Faces::new(s, pres);
    let mut label: Vec<usize> = Vec::new();
    let mut uf: Vec<usize> = Vec::new();
    let mut truncated: Vec<bool> = Vec::new();
    fn find(uf: &mut [usize], mut x: usize) -> usize {
        while uf[x] != x {
            uf[x] = uf[uf[x]];
            x = uf[x];
        }
        x
    }
    // constraints wind(left) - wind(right) = n across walls
    let mut relations: Vec<(usize, usize, i64)> = Vec::new();
    let mut starts: Vec<usize> = Vec::new();
    for &(d, k) in &wall_darts {
        let n = net[&edge_table.intern(pres, edge_of(d), &elems[k]).0];
        if n == 0 {
            continue;
        }
        let right = faces.right_of(d, &elems[k]).0;
        let mut head = elems[k].clone();
        head.extend_from_slice(pres.dart_word(d));
        let left = faces.right_of(opp(d), &pres.reduce(&head)).0;
        relations.push((left, right, n));
        starts.extend([left, right]);
    }
    const NO: usize = usize::MAX;
    for &start in &starts {
        label.resize(faces.elems.len(), NO);
        if label[start] != NO {
            continue;
        }
        let l = uf.len();
        uf.push(l);
        truncated.push(false);
        label[start] = l;
        let mut queue = VecDeque::from([start]);
        let mut explored = 0;
        while let Some(x) = queue.pop_front() {
            if explored >= cap {
                truncated[l] = true;
                break;
            }
            explored += 1;
            let f = faces.face_of[x];
            let anchor = faces.elems[x].clone();
            for d in s.face_walk(f) {
                let mut tail = anchor.clone();
                tail.extend_from_slice(&faces.from_anchor[d]);
                let tail = pres.reduce(&tail);
                let mut head = tail.clone();
                head.extend_from_slice(pres.dart_word(d));
                let head = pres.reduce(&head);
                let even_tail = if d & 1 == 0 { &tail } else { &head };
                if is_wall(&mut edge_table, edge_of(d), even_tail).is_some() {
                    continue;
                }
                let (y, _) = faces.right_of(opp(d), &head);
                label.resize(faces.elems.len(), NO);
                if label[y] == NO {
                    label[y] = l;
                    queue.push_back(y);
                } else {
                    let (a, b) = (find(&mut uf, label[y]), find(&mut uf, l));
                    if a != b {
                        uf[a] = b;
                    }
                }
            }
        }
    }
    label.resize(faces.elems.len(), NO);
    let roots: Vec<usize> = (0..uf.len()).map(|l| find(&mut uf, l)).collect();
    let mut big = vec![false; uf.len()];
    let mut size = vec![0i64; uf.len()];
    for l in 0..uf.len() {
        big[roots[l]] |= truncated[l];
    }
    for &l in label.iter().filter(|&&l| l != NO) {
        size[roots[l]] += 1;
    }
    // winding numbers relative to one region of each group of linked regions
    let mut adj: Vec<Vec<(usize, i64)>> = vec![Vec::new(); uf.len()];
    for &(left, right, n) in &relations {
        let (a, b) = (roots[label[left]], roots[label[right]]);
        adj[b].push((a, n));
        adj[a].push((b, -n));
    }
    let mut wind: Vec<Option<i64>> = vec![None; uf.len()];
    let mut total = 0i64;
    for r in 0..uf.len() {
        if roots[r] != r || wind[r].is_some() {
            continue;
        }
        let mut group = vec![r];
        wind[r] = Some(0);
        let mut i = 0;
        while i < group.len() {
            let a = group[i];
            i += 1;
            for &(b, n) in &adj[a] {
                let w = wind[a].unwrap() + n;
                match wind[b] {
                    None => {
                        wind[b] = Some(w);
                        group.push(b);
                    }
                    Some(x) => debug_assert_eq!(x, w, "winding numbers are well defined"),
                }
            }
        }
        let capped: Vec<i64> = group.iter().filter(|&&a| big[a]).map(|&a| wind[a].unwrap()).collect();
        let Some(&zero) = capped.first() else {
            return Ok(None);
        };
        if capped.iter().any(|&w| w != zero) {
            return Ok(None);
        }
        total += group.iter().filter(|&&a| !big[a]).map(|&a| (wind[a].unwrap() - zero) * size[a]).sum::<i64>();
    }
    Ok(Some(total))
}
