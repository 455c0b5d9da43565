//! Minimal bigon search and the smoothing driver that reduces a filling system to a tight
//! system of primitive curves.
//!
//! Sector `4v + p` sits at vertex `v` between darts `p` and `p + 1` of its rotation, read
//! counterclockwise from the least dart. Its two sides run along the curves leaving `v`
//! through those darts.

use rand::seq::SliceRandom;

use crate::area::AreaPrecomp;
use crate::cover::has_simple_closed_lift;
use crate::curves::{Choice, CurveSystem, Provenance, SmoothMap, SmoothingRecord, SmoothingTrace};
use crate::error::{Error, Result};
use crate::generate::rng;
use crate::geodesic::GeodesicForm;
use crate::quad::QuadSystem;
use crate::surface::opp;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BigonReport {
    pub sector: usize,
    pub vertex: usize,
    /// Length of each side.
    pub side: usize,
    /// Number of faces enclosed in the universal cover.
    pub area: i64,
    pub up: Vec<usize>,
    pub down: Vec<usize>,
}

impl BigonReport {
    pub fn total_length(&self) -> usize {
        2 * self.side
    }

    /// Closed boundary walk: up the first side, back down the second.
    pub fn boundary(&self) -> Vec<usize> {
        let mut w = self.up.clone();
        w.extend(self.down.iter().rev().map(|&d| opp(d)));
        w
    }

    /// Whether the length and area bounds for a system with `n` vertices on genus `g`
    /// hold, with the length counted over both sides.
    pub fn within_bounds(&self, n: usize, g: usize) -> bool {
        let (n, g, l) = (n as i64, g as i64, self.total_length() as i64);
        l <= 8 * n && self.area * (4 * g - 6) <= 4 * g * n * l
    }
}

/// No balanced bigon with sides of length at most `max_side` starts at any of `sectors`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TightCertificate {
    pub sectors: usize,
    pub max_side: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchOutcome {
    Tight(TightCertificate),
    Bigon(BigonReport),
}

/// Order in which sectors are ranked; equal-area bigons go to the earliest sector.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum SectorOrder {
    #[default]
    Natural,
    Shuffled(u64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    pub order: SectorOrder,
    /// Probe sectors on the rayon pool; ignored without the `parallel` feature.
    pub parallel: bool,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig { order: SectorOrder::Natural, parallel: cfg!(feature = "parallel") }
    }
}

/// Read-only context shared by all sector probes of one search.
pub struct SectorSearch<'a> {
    cs: &'a CurveSystem,
    q: QuadSystem,
    areas: AreaPrecomp,
    max_side: usize,
}

impl<'a> SectorSearch<'a> {
    pub fn new(cs: &'a CurveSystem, genus: usize) -> Result<Self> {
        if !cs.is_filling(genus) {
            return Err(Error::Invalid(format!("system does not fill the genus-{genus} surface")));
        }
        if !cs.find_empty_monogons().is_empty() {
            return Err(Error::Invalid("system has an empty monogon".into()));
        }
        let q = QuadSystem::build(&cs.surface)?;
        let areas = AreaPrecomp::new(&cs.surface)?;
        Ok(SectorSearch { cs, q, areas, max_side: 4 * cs.num_vertices() })
    }

    pub fn num_sectors(&self) -> usize {
        4 * self.cs.num_vertices()
    }
    pub fn max_side(&self) -> usize {
        self.max_side
    }

    /// The balanced bigon starting at `sector`, if the first pair of homotopic sides
    /// bounds one.
    pub fn probe(&self, sector: usize) -> Result<Option<BigonReport>> {
        let (cs, q) = (self.cs, &self.q);
        let (v, p) = (sector / 4, sector % 4);
        let rot = cs.min_rotation(v);
        let (mut u, mut d) = (rot[p], rot[(p + 1) % 4]);
        let s = &cs.surface;
        // geodesic of q(D)^-1 q(U)
        let mut geo = GeodesicForm::new(0);
        let mut up = Vec::new();
        let mut down = Vec::new();
        for side in 1..=self.max_side {
            if let Some([a, b]) = q.q(u) {
                geo.extend_back(q, a);
                geo.extend_back(q, b);
            }
            if let Some([a, b]) = q.q(d) {
                geo.extend_front(q, opp(a));
                geo.extend_front(q, opp(b));
            }
            up.push(u);
            down.push(d);
            if s.head(u) == s.head(d) && geo.is_empty() {
                let mut report = BigonReport { sector, vertex: v, side, area: 0, up, down };
                let boundary = report.boundary();
                if !has_simple_closed_lift(s, q, &boundary)? {
                    return Ok(None);
                }
                report.area = self.areas.area_of_contractible(&boundary).abs();
                return Ok(Some(report));
            }
            u = cs.succ(u);
            d = cs.succ(d);
        }
        Ok(None)
    }
}

fn ranks(sectors: usize, order: SectorOrder) -> Vec<usize> {
    let mut seq: Vec<usize> = (0..sectors).collect();
    if let SectorOrder::Shuffled(seed) = order {
        seq.shuffle(&mut rng(seed));
    }
    let mut rank = vec![0; sectors];
    for (i, &s) in seq.iter().enumerate() {
        rank[s] = i;
    }
    rank
}

fn probe_all(search: &SectorSearch, parallel: bool) -> Result<Vec<Option<BigonReport>>> {
    let n = search.num_sectors();
    #[cfg(feature = "parallel")]
    if parallel {
        use rayon::prelude::*;
        return (0..n).into_par_iter().map(|s| search.probe(s)).collect();
    }
    let _ = parallel;
    (0..n).map(|s| search.probe(s)).collect()
}

/// Certifies tightness or returns a balanced bigon of least area, which is minimal.
pub fn minimal_bigon_search(cs: &CurveSystem, genus: usize, cfg: SearchConfig) -> Result<SearchOutcome> {
    let search = SectorSearch::new(cs, genus)?;
    let found = probe_all(&search, cfg.parallel)?;
    let rank = ranks(search.num_sectors(), cfg.order);
    let best = found.into_iter().flatten().min_by_key(|r| (r.area, rank[r.sector]));
    Ok(match best {
        Some(r) => SearchOutcome::Bigon(r),
        None => SearchOutcome::Tight(TightCertificate { sectors: search.num_sectors(), max_side: search.max_side() }),
    })
}

/// One smoothing of the driver together with how it moved the darts.
#[derive(Clone, Debug)]
pub struct Step {
    pub record: SmoothingRecord,
    pub map: SmoothMap,
}

/// Smooths the corner of every face of degree one until none is left, never joining the
/// two ends of the loop into a closed strand.
pub fn smooth_all_empty_monogons(cs: &CurveSystem) -> Result<(CurveSystem, Vec<Step>)> {
    let mut cur = cs.clone();
    let mut steps = Vec::new();
    while let Some(&(v, d)) = cur.find_empty_monogons().first() {
        let choice = cur.choice_separating(v, opp(d), d);
        let record = SmoothingRecord { vertex: v, choice, provenance: Provenance::Monogon, origin: cur.vertex_origin[v] };
        let (next, map) = cur.smooth(v, choice)?;
        steps.push(Step { record, map });
        cur = next;
    }
    Ok((cur, steps))
}

/// Smooths the corner of a bigon found in `cs`, keeping its two sides apart.
pub fn smooth_minimal_bigon(cs: &CurveSystem, r: &BigonReport) -> Result<(CurveSystem, Step)> {
    let v = r.vertex;
    let stale = || Error::Smoothing(format!("bigon report for sector {} is stale", r.sector));
    if v >= cs.num_vertices() || r.up.len() != r.side || r.down.len() != r.side {
        return Err(stale());
    }
    let rot = cs.min_rotation(v);
    let (a, b) = (rot[r.sector % 4], rot[(r.sector + 1) % 4]);
    if cs.walk_along(a, r.side) != r.up || cs.walk_along(b, r.side) != r.down {
        return Err(stale());
    }
    let choice: Choice = cs.choice_separating(v, a, b);
    let record = SmoothingRecord { vertex: v, choice, provenance: Provenance::BigonCorner, origin: cs.vertex_origin[v] };
    let (next, map) = cs.smooth(v, choice)?;
    Ok((next, Step { record, map }))
}

#[derive(Clone, Debug)]
pub struct KernelRun {
    pub system: CurveSystem,
    pub steps: Vec<Step>,
    /// Every bigon smoothed, in order.
    pub bigons: Vec<BigonReport>,
    pub certificate: TightCertificate,
}

impl KernelRun {
    pub fn trace(&self) -> SmoothingTrace {
        self.steps.iter().map(|s| s.record.clone()).collect()
    }
}

/// Alternates between smoothing all empty monogons and one minimal bigon until the
/// search certifies tightness.
pub fn smoothing_minimal(cs: &CurveSystem, cfg: SearchConfig) -> Result<KernelRun> {
    let genus = cs.surface.genus();
    if genus < 2 {
        return Err(Error::LowGenus(genus));
    }
    let start = cs.num_vertices();
    let mut cur = cs.clone();
    let mut steps = Vec::new();
    let mut bigons = Vec::new();
    loop {
        let (next, mono) = smooth_all_empty_monogons(&cur)?;
        steps.extend(mono);
        cur = next;
        match minimal_bigon_search(&cur, genus, cfg)? {
            SearchOutcome::Tight(certificate) => {
                debug_assert!(steps.len() <= start);
                return Ok(KernelRun { system: cur, steps, bigons, certificate });
            }
            SearchOutcome::Bigon(r) => {
                let (next, step) = smooth_minimal_bigon(&cur, &r)?;
                steps.push(step);
                bigons.push(r);
                cur = next;
            }
        }
    }
}
