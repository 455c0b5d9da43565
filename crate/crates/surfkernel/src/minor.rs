//! Minor operations on embedded graphs, their smoothing counterparts in the medial system,
//! and the minor kernel built from the smoothing driver.
//!
//! Smoothing medial vertex `e` merges two opposite corners: the faces around the ends of
//! `e` (contraction) or the faces on both sides of `e` (deletion).

use std::fmt;
use std::fmt::Write as _;

use crate::bigon::{smoothing_minimal, KernelRun, SearchConfig};
use crate::curves::{Choice, CurveSystem, FaceColor, Provenance, SmoothingRecord};
use crate::error::{Error, Result};
use crate::medial::medial;
use crate::surface::{edge_of, isomorphic, opp, Surface, NONE};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MinorOp {
    Contract(usize),
    Delete(usize),
}

impl MinorOp {
    pub fn edge(self) -> usize {
        match self {
            MinorOp::Contract(e) | MinorOp::Delete(e) => e,
        }
    }
}

impl fmt::Display for MinorOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MinorOp::Contract(e) => write!(f, "contract {e}"),
            MinorOp::Delete(e) => write!(f, "delete {e}"),
        }
    }
}

/// A minor of a fixed graph, with darts of the minor named by darts of the original.
#[derive(Clone, Debug)]
pub struct Minor {
    /// Live original darts around each vertex, counterclockwise.
    rotations: Vec<Vec<usize>>,
    live: Vec<bool>,
}

impl Minor {
    pub fn new(g: &Surface) -> Self {
        Minor { rotations: g.rotations(), live: vec![true; g.num_edges()] }
    }

    fn locate(&self, d: usize) -> Option<(usize, usize)> {
        self.rotations.iter().enumerate().find_map(|(v, r)| r.iter().position(|&x| x == d).map(|i| (v, i)))
    }

    /// Current surface, with edges renumbered in increasing original order, and the
    /// original id of each current edge.
    pub fn surface(&self) -> Result<(Surface, Vec<usize>)> {
        let edges: Vec<usize> = (0..self.live.len()).filter(|&e| self.live[e]).collect();
        let mut index = vec![NONE; self.live.len()];
        for (i, &e) in edges.iter().enumerate() {
            index[e] = i;
        }
        let rot: Vec<Vec<usize>> = self
            .rotations
            .iter()
            .map(|r| r.iter().map(|&d| 2 * index[edge_of(d)] + (d & 1)).collect())
            .collect();
        Ok((Surface::from_rotations(&rot)?, edges))
    }

    pub fn apply(&mut self, op: MinorOp) -> Result<()> {
        let e = op.edge();
        if e >= self.live.len() || !self.live[e] {
            return Err(Error::Minor(format!("{op}: edge is not live")));
        }
        let (d, o) = (2 * e, 2 * e + 1);
        let (u, i) = self.locate(d).expect("live dart is placed");
        let (w, j) = self.locate(o).expect("live dart is placed");
        match op {
            MinorOp::Contract(_) => {
                if u == w {
                    return Err(Error::Minor(format!("{op}: edge is a loop")));
                }
                let rw = &self.rotations[w];
                let spliced: Vec<usize> = (1..rw.len()).map(|k| rw[(j + k) % rw.len()]).collect();
                self.rotations[u].splice(i..=i, spliced);
                self.rotations.remove(w);
            }
            MinorOp::Delete(_) => {
                let (s, edges) = self.surface()?;
                let cd = 2 * edges.binary_search(&e).expect("live edge is listed");
                // also rejects bridges and pendant edges
                if s.face(cd) == s.face(opp(cd)) {
                    return Err(Error::Minor(format!("{op}: both sides lie in one face")));
                }
                self.rotations[u].retain(|&x| x != d);
                self.rotations[w].retain(|&x| x != o);
            }
        }
        self.live[e] = false;
        Ok(())
    }
}

/// The minor of `g` obtained by the operations in order, with the original id of each
/// of its edges.
pub fn apply_minor_ops(g: &Surface, ops: &[MinorOp]) -> Result<(Surface, Vec<usize>)> {
    let mut m = Minor::new(g);
    for &op in ops {
        m.apply(op)?;
    }
    m.surface()
}

/// The minor operation a colored smoothing stands for.
pub fn op_of_smoothing(cs: &CurveSystem, v: usize, choice: Choice) -> Result<MinorOp> {
    let color = cs
        .merged_color(v, choice)
        .ok_or_else(|| Error::Minor("system carries no face coloring".into()))?;
    let e = cs.vertex_origin[v];
    Ok(match color {
        FaceColor::Vertex => MinorOp::Contract(e),
        FaceColor::Face => MinorOp::Delete(e),
    })
}

/// The smoothing of a colored medial system that performs `op` on its graph.
pub fn smoothing_of_op(cs: &CurveSystem, op: MinorOp) -> Result<(usize, Choice)> {
    let v = cs
        .vertex_origin
        .iter()
        .position(|&o| o == op.edge())
        .ok_or_else(|| Error::Minor(format!("{op}: edge is not live")))?;
    for choice in [Choice::A, Choice::B] {
        if op_of_smoothing(cs, v, choice)? == op {
            return Ok((v, choice));
        }
    }
    unreachable!("the two choices merge faces of both colors")
}

/// Applies minor operations as smoothings of the medial system, checking each against
/// the graph it stands for.
pub fn smooth_ops(m: &CurveSystem, g: &Surface, ops: &[MinorOp]) -> Result<(CurveSystem, Vec<SmoothingRecord>)> {
    let mut minor = Minor::new(g);
    let mut cur = m.clone();
    let mut trace = Vec::new();
    for &op in ops {
        minor.apply(op)?;
        let (v, choice) = smoothing_of_op(&cur, op)?;
        trace.push(SmoothingRecord { vertex: v, choice, provenance: Provenance::Minor, origin: cur.vertex_origin[v] });
        cur = cur.smooth(v, choice)?.0;
    }
    Ok((cur, trace))
}

#[derive(Clone, Debug)]
pub struct MinorKernel {
    pub kernel: Surface,
    /// Original id of each kernel edge.
    pub edges: Vec<usize>,
    pub ops: Vec<MinorOp>,
    pub run: KernelRun,
}

/// A minor kernel of `g`: the graph whose medial is the smoothing-minimal system of the
/// medial of `g`.
pub fn minor_kernel(g: &Surface, cfg: SearchConfig) -> Result<MinorKernel> {
    if g.genus() < 2 {
        return Err(Error::LowGenus(g.genus()));
    }
    let m = medial(g);
    let run = smoothing_minimal(&m, cfg)?;
    let mut cur = m;
    let mut ops = Vec::with_capacity(run.steps.len());
    for step in &run.steps {
        let r = &step.record;
        ops.push(op_of_smoothing(&cur, r.vertex, r.choice)?);
        cur = cur.smooth(r.vertex, r.choice)?.0;
    }
    let (kernel, edges) = apply_minor_ops(g, &ops)?;
    if !isomorphic(&medial(&kernel).surface, &run.system.surface) {
        return Err(Error::Minor("kernel medial differs from the smoothed system".into()));
    }
    Ok(MinorKernel { kernel, edges, ops, run })
}

pub fn format_ops(ops: &[MinorOp]) -> String {
    let mut s = String::new();
    for op in ops {
        writeln!(s, "{op}").unwrap();
    }
    s
}

pub fn parse_ops(text: &str) -> Result<Vec<MinorOp>> {
    let mut ops = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let bad = |msg: String| Error::Parse { line: i + 1, msg };
        let (kind, id) = line.split_once(char::is_whitespace).ok_or_else(|| bad("expected '<op> <edge>'".into()))?;
        let e: usize = id.trim().parse().map_err(|_| bad(format!("bad edge id '{}'", id.trim())))?;
        ops.push(match kind {
            "contract" => MinorOp::Contract(e),
            "delete" => MinorOp::Delete(e),
            _ => return Err(bad(format!("unknown operation '{kind}'"))),
        });
    }
    Ok(ops)
}

fn choice_name(c: Choice) -> &'static str {
    match c {
        Choice::A => "A",
        Choice::B => "B",
    }
}

fn provenance_name(p: Provenance) -> &'static str {
    match p {
        Provenance::Monogon => "monogon",
        Provenance::BigonCorner => "bigon",
        Provenance::Minor => "minor",
    }
}

/// One line per smoothing: `smooth <vertex> origin=<root vertex> choice=<A|B> kind=<k>`.
pub fn format_trace(trace: &[SmoothingRecord]) -> String {
    let mut s = String::new();
    for r in trace {
        writeln!(
            s,
            "smooth {} origin={} choice={} kind={}",
            r.vertex,
            r.origin,
            choice_name(r.choice),
            provenance_name(r.provenance)
        )
        .unwrap();
    }
    s
}

pub fn parse_trace(text: &str) -> Result<Vec<SmoothingRecord>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let bad = |msg: &str| Error::Parse { line: i + 1, msg: msg.to_string() };
        let toks: Vec<&str> = line.split_whitespace().collect();
        let [ "smooth", v, origin, choice, kind] = toks.as_slice() else {
            return Err(bad("expected 'smooth <v> origin=<o> choice=<c> kind=<k>'"));
        };
        let field = |t: &str, key: &str| t.strip_prefix(key).map(str::to_string).ok_or_else(|| bad(key));
        let vertex = v.parse().map_err(|_| bad("bad vertex"))?;
        let origin = field(origin, "origin=")?.parse().map_err(|_| bad("bad origin"))?;
        let choice = match field(choice, "choice=")?.as_str() {
            "A" => Choice::A,
            "B" => Choice::B,
            _ => return Err(bad("bad choice")),
        };
        let provenance = match field(kind, "kind=")?.as_str() {
            "monogon" => Provenance::Monogon,
            "bigon" => Provenance::BigonCorner,
            "minor" => Provenance::Minor,
            _ => return Err(bad("bad kind")),
        };
        out.push(SmoothingRecord { vertex, choice, provenance, origin });
    }
    Ok(out)
}

pub fn format_walk(walk: &[usize]) -> String {
    let mut s = walk.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(" ");
    s.push('\n');
    s
}

pub fn parse_walk(text: &str) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        for tok in raw.split('#').next().unwrap_or("").split_whitespace() {
            out.push(tok.parse().map_err(|_| Error::Parse { line: i + 1, msg: format!("bad dart '{tok}'") })?);
        }
    }
    Ok(out)
}
