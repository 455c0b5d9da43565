//! Geodesic walks in a system of quads, kept as run-length encoded turn sequences.
//!
//! A walk is geodesic in the universal cover iff its turn sequence has no 0 (spur) and no
//! bracket `(s, 2s, .., 2s, s)` with `s = ±1`. Both ends accept O(1) amortized extension.

use std::collections::VecDeque;

use crate::quad::QuadSystem;
use crate::surface::{opp, NONE};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeodesicForm {
    start: usize,
    end: usize,
    first: usize,
    last: usize,
    len: usize,
    runs: VecDeque<(i64, usize)>,
}

impl GeodesicForm {
    /// The empty walk at vertex `v` of the quad system.
    pub fn new(v: usize) -> Self {
        GeodesicForm { start: v, end: v, first: NONE, last: NONE, len: 0, runs: VecDeque::new() }
    }

    pub fn from_darts(q: &QuadSystem, darts: &[usize]) -> Self {
        let start = darts.first().map(|&d| q.tail(d)).unwrap_or(0);
        let mut g = GeodesicForm::new(start);
        for &d in darts {
            g.extend_back(q, d);
        }
        g
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }
    pub fn len(&self) -> usize {
        self.len
    }
    pub fn start(&self) -> usize {
        self.start
    }
    pub fn end(&self) -> usize {
        self.end
    }
    pub fn runs(&self) -> impl Iterator<Item = (i64, usize)> + '_ {
        self.runs.iter().copied()
    }

    pub fn turns(&self) -> Vec<i64> {
        self.runs.iter().flat_map(|&(t, c)| std::iter::repeat_n(t, c)).collect()
    }

    pub fn to_darts(&self, q: &QuadSystem) -> Vec<usize> {
        if self.len == 0 {
            return Vec::new();
        }
        let mut out = Vec::with_capacity(self.len);
        let mut cur = self.first;
        out.push(cur);
        for &(t, c) in &self.runs {
            for _ in 0..c {
                cur = q.next_with_turn(cur, t);
                out.push(cur);
            }
        }
        debug_assert_eq!(cur, self.last);
        out
    }

    /// Panics unless the stored ends agree with the turns and no spur or bracket remains.
    pub fn assert_invariants(&self, q: &QuadSystem) {
        if self.len == 0 {
            assert!(self.runs.is_empty() && self.start == self.end);
            return;
        }
        let darts = self.to_darts(q);
        assert_eq!(darts.len(), self.len);
        assert_eq!(*darts.last().unwrap(), self.last);
        assert_eq!(q.tail(self.first), self.start);
        assert_eq!(q.head(self.last), self.end);
        assert_eq!(self.turns(), turns_of(q, &darts), "stored turns disagree with the walk");
        let mut prev: Option<i64> = None;
        for &(t, c) in &self.runs {
            assert!(c >= 1 && t != 0 && prev != Some(t));
            prev = Some(t);
        }
        assert!(!has_bracket(&self.turns()), "bracket in {:?}", self.turns());
    }

    fn push_back_turn(&mut self, t: i64, count: usize) {
        if count == 0 {
            return;
        }
        match self.runs.back_mut() {
            Some((v, c)) if *v == t => *c += count,
            _ => self.runs.push_back((t, count)),
        }
    }

    fn push_front_turn(&mut self, t: i64, count: usize) {
        if count == 0 {
            return;
        }
        match self.runs.front_mut() {
            Some((v, c)) if *v == t => *c += count,
            _ => self.runs.push_front((t, count)),
        }
    }

    fn pop_back_turn(&mut self) -> i64 {
        let (t, c) = self.runs.back_mut().expect("turn to pop");
        let t = *t;
        *c -= 1;
        if *c == 0 {
            self.runs.pop_back();
        }
        t
    }

    fn pop_front_turn(&mut self) -> i64 {
        let (t, c) = self.runs.front_mut().expect("turn to pop");
        let t = *t;
        *c -= 1;
        if *c == 0 {
            self.runs.pop_front();
        }
        t
    }

    fn clear_at(&mut self, v: usize) {
        *self = GeodesicForm::new(v);
    }

    /// Appends dart `d`, whose tail must be the current end.
    pub fn extend_back(&mut self, q: &QuadSystem, d: usize) {
        assert_eq!(q.tail(d), self.end, "dart does not continue the walk");
        if self.len == 0 {
            self.first = d;
            self.last = d;
            self.len = 1;
            self.start = q.tail(d);
            self.end = q.head(d);
            return;
        }
        let t = q.turn(self.last, d);
        if t == 0 {
            if self.len == 1 {
                let s = self.start;
                self.clear_at(s);
                return;
            }
            let tl = self.pop_back_turn();
            self.last = q.prev_with_turn(self.last, tl);
            self.len -= 1;
            self.end = q.head(self.last);
            return;
        }
        self.push_back_turn(t, 1);
        self.last = d;
        self.len += 1;
        self.end = q.head(d);
        self.fix_back(q);
    }

    /// Prepends dart `d`, whose head must be the current start.
    pub fn extend_front(&mut self, q: &QuadSystem, d: usize) {
        assert_eq!(q.head(d), self.start, "dart does not lead into the walk");
        if self.len == 0 {
            self.first = d;
            self.last = d;
            self.len = 1;
            self.start = q.tail(d);
            self.end = q.head(d);
            return;
        }
        let t = q.turn(d, self.first);
        if t == 0 {
            if self.len == 1 {
                let e = self.end;
                self.clear_at(e);
                return;
            }
            let tf = self.pop_front_turn();
            self.first = q.next_with_turn(self.first, tf);
            self.len -= 1;
            self.start = q.tail(self.first);
            return;
        }
        self.push_front_turn(t, 1);
        self.first = d;
        self.len += 1;
        self.start = q.tail(d);
        self.fix_front(q);
    }

    /// Length `k` of the bracket `(s, 2s^k, s)` ending the turn sequence, if any.
    fn back_bracket(&self) -> Option<(i64, usize)> {
        let n = self.runs.len();
        let &(t, c) = self.runs.back()?;
        if t.abs() != 1 {
            return None;
        }
        if c >= 2 {
            return Some((t, 0));
        }
        if n >= 3 && self.runs[n - 2].0 == 2 * t && self.runs[n - 3].0 == t {
            return Some((t, self.runs[n - 2].1));
        }
        None
    }

    fn front_bracket(&self) -> Option<(i64, usize)> {
        let &(t, c) = self.runs.front()?;
        if t.abs() != 1 {
            return None;
        }
        if c >= 2 {
            return Some((t, 0));
        }
        if self.runs.len() >= 3 && self.runs[1].0 == 2 * t && self.runs[2].0 == t {
            return Some((t, self.runs[1].1));
        }
        None
    }

    fn fix_back(&mut self, q: &QuadSystem) {
        let Some((s, k)) = self.back_bracket() else { return };
        // the bracket spans the last k + 3 edges; it is replaced by k + 1 edges on the
        // far side of the strip of quads it bounds
        let covers_first = self.len == k + 3;
        self.pop_back_turn();
        if k > 0 {
            self.runs.pop_back();
        }
        self.pop_back_turn();
        let new_last = opp(q.rot(opp(self.last), s));
        if covers_first {
            self.first = q.rot(self.first, -s);
        } else {
            let tp = q.normalize_turn(self.pop_back_turn() - s);
            assert_ne!(tp, 0, "bracket replacement produced a spur");
            self.push_back_turn(tp, 1);
        }
        self.push_back_turn(-2 * s, k);
        self.last = new_last;
        self.len -= 2;
        if self.len == 1 {
            assert_eq!(self.first, self.last);
        }
    }

    fn fix_front(&mut self, q: &QuadSystem) {
        let Some((s, k)) = self.front_bracket() else { return };
        let covers_last = self.len == k + 3;
        self.pop_front_turn();
        if k > 0 {
            self.runs.pop_front();
        }
        self.pop_front_turn();
        let new_first = q.rot(self.first, -s);
        if covers_last {
            self.last = opp(q.rot(opp(self.last), s));
        } else {
            let tn = q.normalize_turn(self.pop_front_turn() - s);
            assert_ne!(tn, 0, "bracket replacement produced a spur");
            self.push_front_turn(tn, 1);
        }
        self.push_front_turn(-2 * s, k);
        self.first = new_first;
        self.len -= 2;
        if self.len == 1 {
            assert_eq!(self.first, self.last);
        }
    }
}

/// True when a linear turn sequence contains a bracket.
pub fn has_bracket(turns: &[i64]) -> bool {
    let n = turns.len();
    let mut i = 0;
    while i < n {
        let s = turns[i];
        if s.abs() == 1 {
            let mut j = i + 1;
            while j < n && turns[j] == 2 * s {
                j += 1;
            }
            if j < n && turns[j] == s {
                return true;
            }
        }
        i += 1;
    }
    false
}

fn turns_of(q: &QuadSystem, darts: &[usize]) -> Vec<i64> {
    darts.windows(2).map(|w| q.turn(w[0], w[1])).collect()
}

/// Shortens a walk to a geodesic with the same ends by repeated rewriting passes.
pub fn tighten(q: &QuadSystem, darts: &[usize]) -> Vec<usize> {
    let mut w = darts.to_vec();
    'outer: loop {
        let t = turns_of(q, &w);
        // turn t[i] sits between w[i] and w[i + 1]
        if let Some(i) = t.iter().position(|&x| x == 0) {
            w.drain(i..i + 2);
            continue;
        }
        for i in 0..t.len() {
            let s = t[i];
            if s.abs() != 1 {
                continue;
            }
            let mut j = i + 1;
            while j < t.len() && t[j] == 2 * s {
                j += 1;
            }
            if j < t.len() && t[j] == s {
                let k = j - i - 1;
                let bottom = strip_side(q, w[i], k, s);
                w.splice(i..j + 2, bottom);
                continue 'outer;
            }
        }
        return w;
    }
}

/// The `k + 1` edges opposite a bracket that starts with dart `first`.
fn strip_side(q: &QuadSystem, first: usize, k: usize, s: i64) -> Vec<usize> {
    let mut out = Vec::with_capacity(k + 1);
    let mut b = q.rot(first, -s);
    out.push(b);
    for _ in 0..k {
        b = q.next_with_turn(b, -2 * s);
        out.push(b);
    }
    out
}

/// The rightmost geodesic homotopic to `darts` with fixed ends: no interior turn is `+1`.
pub fn right_canonical(q: &QuadSystem, darts: &[usize]) -> Vec<usize> {
    let mut w = tighten(q, darts);
    let mut guard = 0usize;
    let limit = 16 * (w.len() + 4) * (w.len() + 4);
    while let Some(i) = (1..w.len()).find(|&i| q.turn(w[i - 1], w[i]) == 1) {
        let a = w[i - 1];
        let p2 = q.phi(q.phi(a));
        w[i - 1] = opp(q.phi(p2));
        w[i] = opp(p2);
        guard += 1;
        assert!(guard < limit, "right flips do not terminate");
    }
    w
}
