//! Built-in maps with documented, machine-checked properties.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::plmap::PLMap;
use crate::rat::{r, Rat};

#[derive(Clone, Debug, Serialize)]
pub struct Fixture {
    pub name: &'static str,
    #[serde(skip)]
    pub map: PLMap,
    /// `(claim, provenance)` pairs; each claim is re-derived by the test suite.
    pub documented_properties: Vec<(&'static str, &'static str)>,
}

const NAMES: [&str; 3] = ["fig1", "identity", "tent"];

pub fn list_fixtures() -> Vec<&'static str> {
    NAMES.to_vec()
}

fn bps(pts: &[(i64, i64, i64, i64)]) -> Vec<(Rat, Rat)> {
    pts.iter().map(|&(a, b, c, d)| (r(a, b), r(c, d))).collect()
}

pub fn fixture(name: &str) -> Result<Fixture> {
    let (name, points, props): (&'static str, _, Vec<(&'static str, &'static str)>) = match name {
        "tent" => (
            "tent",
            bps(&[(0, 1, 0, 1), (1, 2, 1, 1), (1, 1, 0, 1)]),
            vec![
                ("onto [0,1] with two laps of slope 2 and -2", "by definition"),
                ("Fix = {0, 2/3}", "per-lap solve"),
                (
                    "f^p has exactly 2^p fixed points",
                    "2^p laps, each crossing the diagonal once",
                ),
                ("nonwandering set is the whole interval", "periodic points are dense"),
            ],
        ),
        "identity" => (
            "identity",
            bps(&[(0, 1, 0, 1), (1, 1, 1, 1)]),
            vec![
                ("every point is fixed", "identity lap"),
                ("every limit set of x is {x}", "constant orbits"),
            ],
        ),
        "fig1" => (
            "fig1",
            bps(&[(0, 1, 0, 1), (1, 4, 1, 1), (5, 8, 1, 2), (1, 1, 1, 1)]),
            vec![
                ("continuous and onto [0,1]", "breakpoint values"),
                ("f(1/4) = 1 and 1 is fixed", "lap formulas"),
                (
                    "preimage of 1/4 is {1/16}; its only backward branch is 4^-(k+1)",
                    "per-lap solve",
                ),
                (
                    "laps 2 and 3 have range [1/2,1], which is forward invariant",
                    "lap images",
                ),
                ("f((1/4,1/2)) lies in (1/2,1]", "lap 2 is decreasing from 1 to 2/3"),
                (
                    "a backward branch has at most one point in (1/4,1/2)",
                    "previous two claims",
                ),
                ("Fix = {0, 4/7, 1}", "per-lap solve"),
                (
                    "1/4 is wandering yet lies in the alpha-limit set of 1",
                    "constant preimage sequence 1/4",
                ),
            ],
        ),
        other => return Err(Error::UnknownFixture(other.to_string())),
    };
    let map = PLMap::from_breakpoints(points).expect("fixture maps are valid");
    Ok(Fixture {
        name,
        map,
        documented_properties: props,
    })
}

pub fn fixture_map(name: &str) -> Result<PLMap> {
    fixture(name).map(|f| f.map)
}
