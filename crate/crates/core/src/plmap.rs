//! Continuous piecewise-linear self-maps of a compact interval.
//!
//! A [`PLMap`] is a finite breakpoint list `(x_0, y_0), …, (x_n, y_n)` with
//! strictly increasing `x`, spanning the domain. Validation rejects constant
//! laps and maps that are not onto, so every point has a finite, nonempty
//! preimage set that can be computed exactly lap by lap.

use std::fmt::Write as _;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::rat::Rat;

/// One linear piece `y = slope * x + intercept` on `x_range`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Lap {
    pub index: usize,
    pub x_range: Interval,
    pub slope: Rat,
    pub intercept: Rat,
}

impl Lap {
    fn through(index: usize, (x0, y0): &(Rat, Rat), (x1, y1): &(Rat, Rat)) -> Lap {
        let slope = (y1 - y0) / (x1 - x0);
        let intercept = y0 - &slope * x0;
        Lap {
            index,
            x_range: Interval::closed(x0.clone(), x1.clone()),
            slope,
            intercept,
        }
    }

    pub fn apply(&self, x: &Rat) -> Rat {
        &self.slope * x + &self.intercept
    }

    /// Closed image of the lap.
    pub fn image(&self) -> Interval {
        let a = self.apply(&self.x_range.lo);
        let b = self.apply(&self.x_range.hi);
        Interval::closed(Rat::min_of(a.clone(), b.clone()), Rat::max_of(a, b))
    }

    /// The unique `x` on this lap with `apply(x) == y`, if any.
    pub fn solve(&self, y: &Rat) -> Option<Rat> {
        let x = (y - &self.intercept) / &self.slope;
        self.x_range.contains(&x).then_some(x)
    }

    pub fn is_identity(&self) -> bool {
        self.slope == Rat::one() && self.intercept.is_zero()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PLMap {
    domain: Interval,
    breakpoints: Vec<(Rat, Rat)>,
    laps: Vec<Lap>,
}

/// Solutions of `f(x) = x`: isolated points plus whole segments contributed
/// by identity laps.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct FixedPoints {
    pub points: Vec<Rat>,
    pub segments: Vec<Interval>,
}

impl FixedPoints {
    pub fn len_isolated(&self) -> usize {
        self.points.len()
    }

    pub fn contains(&self, x: &Rat) -> bool {
        self.points.binary_search(x).is_ok() || self.segments.iter().any(|s| s.contains(x))
    }
}

impl PLMap {
    /// Validates a breakpoint list; the domain is `[x_first, x_last]`.
    pub fn from_breakpoints(breakpoints: Vec<(Rat, Rat)>) -> Result<Self> {
        if breakpoints.len() < 2 {
            return Err(Error::InvalidMap(vec!["need at least two breakpoints".to_string()]));
        }
        let domain = Interval::try_new(
            breakpoints[0].0.clone(),
            breakpoints[breakpoints.len() - 1].0.clone(),
            false,
            false,
        );
        match domain {
            Some(d) => Self::with_domain(d, breakpoints),
            None => Err(Error::InvalidMap(vec!["non-monotone breakpoints".to_string()])),
        }
    }

    pub fn with_domain(domain: Interval, breakpoints: Vec<(Rat, Rat)>) -> Result<Self> {
        let mut problems = Vec::new();
        if domain.lo_open || domain.hi_open || domain.lo >= domain.hi {
            problems.push(format!("domain {domain} must be a nondegenerate closed interval"));
        }
        if breakpoints.len() < 2 {
            problems.push("need at least two breakpoints".to_string());
            return Err(Error::InvalidMap(problems));
        }
        for w in breakpoints.windows(2) {
            if w[1].0 <= w[0].0 {
                problems.push(format!("non-monotone breakpoints at x = {} then {}", w[0].0, w[1].0));
            }
        }
        if breakpoints[0].0 != domain.lo || breakpoints[breakpoints.len() - 1].0 != domain.hi {
            problems.push(format!("breakpoints do not span domain {domain}"));
        }
        for (x, y) in &breakpoints {
            if !domain.contains(y) {
                problems.push(format!("not self-map: f({x}) = {y} outside {domain}"));
            }
        }
        if !problems.is_empty() {
            return Err(Error::InvalidMap(problems));
        }
        for w in breakpoints.windows(2) {
            if w[0].1 == w[1].1 {
                problems.push(format!("constant lap [{},{}]", w[0].0, w[1].0));
            }
        }
        let ymin = breakpoints.iter().map(|b| &b.1).min().unwrap();
        let ymax = breakpoints.iter().map(|b| &b.1).max().unwrap();
        if *ymin != domain.lo || *ymax != domain.hi {
            problems.push(format!("not onto: image [{ymin},{ymax}] != {domain}"));
        }
        if !problems.is_empty() {
            return Err(Error::InvalidMap(problems));
        }
        let laps = breakpoints
            .windows(2)
            .enumerate()
            .map(|(i, w)| Lap::through(i, &w[0], &w[1]))
            .collect();
        Ok(PLMap {
            domain,
            breakpoints,
            laps,
        })
    }

    pub fn domain(&self) -> &Interval {
        &self.domain
    }

    pub fn breakpoints(&self) -> &[(Rat, Rat)] {
        &self.breakpoints
    }

    pub fn laps(&self) -> &[Lap] {
        &self.laps
    }

    pub fn lap_count(&self) -> usize {
        self.laps.len()
    }

    fn check_point(&self, x: &Rat) -> Result<()> {
        if self.domain.contains(x) {
            Ok(())
        } else {
            Err(Error::OutsideDomain {
                point: x.clone(),
                domain: Box::new(self.domain.clone()),
            })
        }
    }

    /// Index of a lap containing `x`; at a shared breakpoint, the left lap.
    fn lap_index_of(&self, x: &Rat) -> usize {
        let i = self.breakpoints.partition_point(|(bx, _)| bx < x);
        i.saturating_sub(1).min(self.laps.len() - 1)
    }

    pub fn eval(&self, x: &Rat) -> Result<Rat> {
        self.check_point(x)?;
        Ok(self.laps[self.lap_index_of(x)].apply(x))
    }

    pub fn eval_iter(&self, x: &Rat, n: usize) -> Result<Rat> {
        self.check_point(x)?;
        let mut cur = x.clone();
        for _ in 0..n {
            cur = self.laps[self.lap_index_of(&cur)].apply(&cur);
        }
        Ok(cur)
    }

    /// `x, f(x), …, f^n(x)`.
    pub fn orbit(&self, x: &Rat, n: usize) -> Result<Vec<Rat>> {
        self.check_point(x)?;
        let mut out = Vec::with_capacity(n + 1);
        out.push(x.clone());
        for i in 0..n {
            let next = self.laps[self.lap_index_of(&out[i])].apply(&out[i]);
            out.push(next);
        }
        Ok(out)
    }

    /// Exact image of `j` (an interval, by continuity).
    pub fn image_interval(&self, j: &Interval) -> Result<Interval> {
        if !self.domain.contains_interval(j) {
            return Err(Error::IntervalOutsideDomain {
                interval: Box::new(j.clone()),
                domain: Box::new(self.domain.clone()),
            });
        }
        if j.is_degenerate() {
            let y = self.eval(&j.lo)?;
            return Ok(Interval::point(y));
        }
        // candidate extremes: endpoints (attained unless open) and interior breakpoints
        let mut cands: Vec<(Rat, bool)> = vec![(self.eval(&j.lo)?, !j.lo_open), (self.eval(&j.hi)?, !j.hi_open)];
        for (bx, by) in &self.breakpoints {
            if bx > &j.lo && bx < &j.hi {
                cands.push((by.clone(), true));
            }
        }
        let min = cands.iter().map(|c| &c.0).min().unwrap().clone();
        let max = cands.iter().map(|c| &c.0).max().unwrap().clone();
        let min_hit = cands.iter().any(|(v, att)| *att && *v == min);
        let max_hit = cands.iter().any(|(v, att)| *att && *v == max);
        Ok(Interval::try_new(min, max, !min_hit, !max_hit)
            .expect("image of a nondegenerate interval under a lap-nonconstant map is nonempty"))
    }

    /// All `x` with `f(x) = y`, ascending, each with the lowest lap index that
    /// attains it.
    pub fn preimages_with_laps(&self, y: &Rat) -> Vec<(Rat, usize)> {
        let mut out: Vec<(Rat, usize)> = Vec::with_capacity(2);
        // laps are ordered by x, so solutions come out ascending; a solution
        // on a shared breakpoint shows up twice in a row
        for lap in &self.laps {
            if let Some(x) = lap.solve(y) {
                if out.last().map(|(px, _)| px == &x).unwrap_or(false) {
                    continue;
                }
                out.push((x, lap.index));
            }
        }
        out
    }

    pub fn preimage_point(&self, y: &Rat) -> Vec<Rat> {
        self.preimages_with_laps(y).into_iter().map(|(x, _)| x).collect()
    }

    /// `self ∘ g`, on the common domain.
    pub fn compose_after(&self, g: &PLMap) -> Result<PLMap> {
        let interior: Vec<&Rat> = self.breakpoints[1..self.breakpoints.len() - 1]
            .iter()
            .map(|(x, _)| x)
            .collect();
        let mut xs: Vec<Rat> = Vec::with_capacity(g.breakpoints.len() * 2);
        for lap in &g.laps {
            xs.push(lap.x_range.lo.clone());
            let img = lap.image();
            let mut cut: Vec<Rat> = interior
                .iter()
                .filter(|b| ***b > img.lo && ***b < img.hi)
                .map(|b| (*b - &lap.intercept) / &lap.slope)
                .collect();
            cut.sort();
            xs.extend(cut);
        }
        xs.push(g.domain.hi.clone());
        let mut pts: Vec<(Rat, Rat)> = Vec::with_capacity(xs.len());
        for x in xs {
            let y = self.eval(&g.eval(&x)?)?;
            pts.push((x, y));
        }
        PLMap::with_domain(self.domain.clone(), merge_collinear(pts))
    }

    /// Exact representation of the `p`-fold iterate.
    pub fn iterate(&self, p: usize, lap_cap: usize) -> Result<PLMap> {
        if p == 0 {
            return Err(Error::InvalidParameter("iterate requires p >= 1".into()));
        }
        if self.lap_count() > lap_cap {
            return Err(Error::LapCapExceeded {
                cap: lap_cap,
                completed: 0,
            });
        }
        let mut g = self.clone();
        for k in 2..=p {
            g = self.compose_after(&g)?;
            if g.lap_count() > lap_cap {
                return Err(Error::LapCapExceeded {
                    cap: lap_cap,
                    completed: k - 1,
                });
            }
        }
        Ok(g)
    }

    pub fn fixed_points(&self) -> FixedPoints {
        let mut points = Vec::new();
        let mut segments: Vec<Interval> = Vec::new();
        let one = Rat::one();
        for lap in &self.laps {
            if lap.slope == one {
                if lap.intercept.is_zero() {
                    match segments.last_mut() {
                        Some(last) if last.hi == lap.x_range.lo => last.hi = lap.x_range.hi.clone(),
                        _ => segments.push(lap.x_range.clone()),
                    }
                }
                continue;
            }
            let x = &lap.intercept / (&one - &lap.slope);
            if lap.x_range.contains(&x) {
                points.push(x);
            }
        }
        points.sort();
        points.dedup();
        points.retain(|p| !segments.iter().any(|s| s.contains(p)));
        FixedPoints { points, segments }
    }

    /// Canonical map-file text; parsing it back yields an equal map.
    pub fn to_map_text(&self) -> String {
        let mut s = String::new();
        writeln!(s, "interval {} {}", self.domain.lo, self.domain.hi).unwrap();
        for (x, y) in &self.breakpoints {
            writeln!(s, "breakpoint {x} {y}").unwrap();
        }
        s
    }

    /// SHA-256 of the canonical text, hex encoded.
    pub fn digest(&self) -> String {
        hex::encode(Sha256::digest(self.to_map_text().as_bytes()))
    }
}

fn merge_collinear(pts: Vec<(Rat, Rat)>) -> Vec<(Rat, Rat)> {
    let mut out: Vec<(Rat, Rat)> = Vec::with_capacity(pts.len());
    for p in pts {
        if out.last().map(|l: &(Rat, Rat)| l.0 == p.0).unwrap_or(false) {
            continue;
        }
        if out.len() >= 2 {
            let a = &out[out.len() - 2];
            let b = &out[out.len() - 1];
            let s1 = (&b.1 - &a.1) / (&b.0 - &a.0);
            let s2 = (&p.1 - &b.1) / (&p.0 - &b.0);
            if s1 == s2 {
                out.pop();
            }
        }
        out.push(p);
    }
    out
}

/// Reads the line-oriented map format:
///
/// ```text
/// interval <lo> <hi>
/// breakpoint <x> <y>     # repeated, x strictly increasing
/// ```
pub fn parse_map(text: &str) -> Result<PLMap> {
    let mut domain: Option<(Rat, Rat)> = None;
    let mut bps: Vec<(Rat, Rat)> = Vec::new();
    let mut last_line = 0;
    for (ln, raw) in text.lines().enumerate() {
        let line_no = ln + 1;
        last_line = line_no;
        let content = raw.split('#').next().unwrap_or("");
        let tokens = tokenize(content);
        if tokens.is_empty() {
            continue;
        }
        let syntax = |column: usize, message: String| Error::Syntax {
            line: line_no,
            column,
            message,
        };
        let (kw_col, kw) = tokens[0];
        let args: Vec<Rat> = tokens[1..]
            .iter()
            .map(|(col, tok)| tok.parse::<Rat>().map_err(|e| syntax(*col, e.to_string())))
            .collect::<Result<_>>()?;
        match kw {
            "interval" | "breakpoint" if args.len() != 2 => {
                let col = tokens.get(3).map(|t| t.0).unwrap_or(raw.len() + 1);
                return Err(syntax(col, format!("`{kw}` takes exactly two rationals")));
            }
            "interval" => {
                if domain.is_some() {
                    return Err(syntax(kw_col, "duplicate `interval` line".into()));
                }
                let mut it = args.into_iter();
                domain = Some((it.next().unwrap(), it.next().unwrap()));
            }
            "breakpoint" => {
                let mut it = args.into_iter();
                bps.push((it.next().unwrap(), it.next().unwrap()));
            }
            other => return Err(syntax(kw_col, format!("unknown keyword `{other}`"))),
        }
    }
    let (lo, hi) = domain.ok_or(Error::Syntax {
        line: last_line + 1,
        column: 1,
        message: "missing `interval` line".into(),
    })?;
    let domain = Interval::try_new(lo.clone(), hi.clone(), false, false)
        .ok_or_else(|| Error::InvalidMap(vec![format!("domain [{lo},{hi}] is empty")]))?;
    PLMap::with_domain(domain, bps)
}

/// Whitespace-separated tokens with their 1-based column.
fn tokenize(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start: Option<usize> = None;
    for (i, c) in line.char_indices() {
        match (c.is_whitespace(), start) {
            (true, Some(s)) => {
                out.push((s, &line[s..i]));
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s, &line[s..]));
    }
    out.into_iter()
        .map(|(byte, tok)| (line[..byte].chars().count() + 1, tok))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::r;

    fn tent() -> PLMap {
        parse_map("interval 0 1\nbreakpoint 0/1 0/1\nbreakpoint 1/2 1/1\nbreakpoint 1/1 0/1\n").unwrap()
    }

    fn fig1() -> PLMap {
        PLMap::from_breakpoints(vec![
            (r(0, 1), r(0, 1)),
            (r(1, 4), r(1, 1)),
            (r(5, 8), r(1, 2)),
            (r(1, 1), r(1, 1)),
        ])
        .unwrap()
    }

    #[test]
    fn tent_parses_with_two_laps() {
        let t = tent();
        assert_eq!(t.lap_count(), 2);
        assert_eq!(t.laps()[0].slope, r(2, 1));
        assert_eq!(t.laps()[1].slope, r(-2, 1));
    }

    #[test]
    fn rejects_constant_lap() {
        let err = parse_map("interval 0 1\nbreakpoint 0 0\nbreakpoint 1/2 1/2\nbreakpoint 1 1/2\n").unwrap_err();
        match err {
            Error::InvalidMap(v) => assert!(v.iter().any(|m| m == "constant lap [1/2,1]"), "{v:?}"),
            e => panic!("unexpected {e:?}"),
        }
    }

    #[test]
    fn rejects_not_onto() {
        let err = parse_map("interval 0 1\nbreakpoint 0 1/4\nbreakpoint 1 3/4\n").unwrap_err();
        match err {
            Error::InvalidMap(v) => assert!(v.iter().any(|m| m.starts_with("not onto")), "{v:?}"),
            e => panic!("unexpected {e:?}"),
        }
    }

    #[test]
    fn rejects_non_monotone_and_non_self_map() {
        let err = parse_map("interval 0 1\nbreakpoint 0 0\nbreakpoint 1/2 3/2\nbreakpoint 1/4 0\nbreakpoint 1 1")
            .unwrap_err();
        match err {
            Error::InvalidMap(v) => {
                assert!(v.iter().any(|m| m.starts_with("non-monotone")));
                assert!(v.iter().any(|m| m.starts_with("not self-map")));
            }
            e => panic!("unexpected {e:?}"),
        }
    }

    #[test]
    fn syntax_errors_carry_position() {
        let err = parse_map("interval 0 1\n  breakpoint 0 x\n").unwrap_err();
        assert_eq!(
            err,
            Error::Syntax {
                line: 2,
                column: 16,
                message: "malformed integer `x`".into()
            }
        );
        let err = parse_map("interval 0 1\nbreakpont 0 0\n").unwrap_err();
        assert!(matches!(err, Error::Syntax { line: 2, column: 1, .. }));
        let err = parse_map("# nothing\nbreakpoint 0 0\n").unwrap_err();
        assert!(matches!(err, Error::Syntax { line: 3, .. }));
    }

    #[test]
    fn comments_and_blank_lines() {
        let m =
            parse_map("# tent\n\ninterval 0 1 # unit\nbreakpoint 0 0\nbreakpoint 2/4 1\n\nbreakpoint 1 0\n").unwrap();
        assert_eq!(m, tent());
    }

    #[test]
    fn emits_canonical_text() {
        assert_eq!(
            tent().to_map_text(),
            "interval 0 1\nbreakpoint 0 0\nbreakpoint 1/2 1\nbreakpoint 1 0\n"
        );
    }

    #[test]
    fn eval_examples() {
        let t = tent();
        assert_eq!(t.eval(&r(1, 2)).unwrap(), r(1, 1));
        assert_eq!(t.eval(&r(1, 3)).unwrap(), r(2, 3));
        assert_eq!(fig1().eval(&r(1, 16)).unwrap(), r(1, 4));
        assert!(matches!(t.eval(&r(3, 2)), Err(Error::OutsideDomain { .. })));
    }

    #[test]
    fn eval_iter_examples() {
        assert_eq!(tent().eval_iter(&r(2, 5), 2).unwrap(), r(2, 5));
        assert_eq!(tent().eval_iter(&r(3, 7), 0).unwrap(), r(3, 7));
        assert_eq!(fig1().eval_iter(&r(1, 4), 2).unwrap(), r(1, 1));
    }

    #[test]
    fn image_examples() {
        let t = tent();
        assert_eq!(
            t.image_interval(&Interval::closed(r(1, 4), r(3, 4))).unwrap(),
            Interval::closed(r(1, 2), r(1, 1))
        );
        assert_eq!(
            t.image_interval(&Interval::closed(r(0, 1), r(1, 2))).unwrap(),
            Interval::closed(r(0, 1), r(1, 1))
        );
        assert_eq!(
            t.image_interval(&Interval::point(r(1, 3))).unwrap(),
            Interval::point(r(2, 3))
        );
        // open endpoints stay open unless the value is attained elsewhere
        let j = Interval::try_new(r(0, 1), r(1, 4), true, true).unwrap();
        assert_eq!(t.image_interval(&j).unwrap(), Interval::open(r(0, 1), r(1, 2)));
        let j = Interval::try_new(r(1, 4), r(3, 4), true, true).unwrap();
        assert_eq!(
            t.image_interval(&j).unwrap(),
            Interval::try_new(r(1, 2), r(1, 1), true, false).unwrap()
        );
    }

    #[test]
    fn preimage_examples() {
        assert_eq!(tent().preimage_point(&r(1, 2)), vec![r(1, 4), r(3, 4)]);
        assert_eq!(fig1().preimage_point(&r(1, 4)), vec![r(1, 16)]);
        assert_eq!(fig1().preimage_point(&r(1, 1)), vec![r(1, 4), r(1, 1)]);
        assert_eq!(fig1().preimages_with_laps(&r(1, 1)), vec![(r(1, 4), 0), (r(1, 1), 2)]);
    }

    #[test]
    fn iterate_examples() {
        let t2 = tent().iterate(2, 100).unwrap();
        let xs: Vec<Rat> = t2.breakpoints().iter().map(|b| b.0.clone()).collect();
        assert_eq!(xs, vec![r(0, 1), r(1, 4), r(1, 2), r(3, 4), r(1, 1)]);
        assert_eq!(tent().iterate(1, 5).unwrap(), tent());
        assert_eq!(
            tent().iterate(10, 100).unwrap_err(),
            Error::LapCapExceeded { cap: 100, completed: 6 }
        );
    }

    #[test]
    fn identity_iterates_stay_one_lap() {
        let id = PLMap::from_breakpoints(vec![(r(0, 1), r(0, 1)), (r(1, 1), r(1, 1))]).unwrap();
        assert_eq!(id.iterate(7, 1).unwrap(), id);
    }

    #[test]
    fn fixed_point_examples() {
        assert_eq!(tent().fixed_points().points, vec![r(0, 1), r(2, 3)]);
        assert_eq!(fig1().fixed_points().points, vec![r(0, 1), r(4, 7), r(1, 1)]);
        let id = PLMap::from_breakpoints(vec![(r(0, 1), r(0, 1)), (r(1, 1), r(1, 1))]).unwrap();
        let fp = id.fixed_points();
        assert!(fp.points.is_empty());
        assert_eq!(fp.segments, vec![Interval::closed(r(0, 1), r(1, 1))]);
    }

    #[test]
    fn partial_identity_segment_absorbs_points() {
        // identity on [0,1/2], then down to 0 and back up to 1
        let m = PLMap::from_breakpoints(vec![
            (r(0, 1), r(0, 1)),
            (r(1, 2), r(1, 2)),
            (r(3, 4), r(0, 1)),
            (r(1, 1), r(1, 1)),
        ])
        .unwrap();
        let fp = m.fixed_points();
        assert_eq!(fp.segments, vec![Interval::closed(r(0, 1), r(1, 2))]);
        assert_eq!(fp.points, vec![r(1, 1)]);
    }
}
