// Copyright 2026 the Spiralwind Authors
// SPDX-License-Identifier: Apache-2.0

//! Profile and map spec strings.
//!
//! Profiles: `exp:a=<real>`, `pow:p=<real>`, `sexp:beta=<real>,c=<real>`,
//! `table:<path.csv>`. Maps: `id`, `scale:<k>`, `rot:<deg>`,
//! `shear-spiral:gamma=<real>`, `compose:<spec>|<spec>|…` (applied left to right).

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Serialize, Serializer};
use spiralwind_core::maps::{shear_spiral_map, MapExpr};
use spiralwind_core::profiles::DecayProfile;

use crate::error::CliResult;
use crate::io::read_table;

pub const PROFILE_GRAMMAR: &str =
    "exp:a=<real> | pow:p=<real> | sexp:beta=<real>,c=<real> | table:<path.csv>";
pub const MAP_GRAMMAR: &str =
    "id | scale:<k> | rot:<deg> | shear-spiral:gamma=<real> | compose:<spec>|<spec>|...";

#[derive(Debug, Clone, PartialEq)]
pub enum ProfileSource {
    Closed(DecayProfile),
    Table(PathBuf),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProfileSpec {
    pub raw: String,
    pub source: ProfileSource,
}

impl ProfileSpec {
    pub fn load(&self) -> CliResult<DecayProfile> {
        match &self.source {
            ProfileSource::Closed(p) => Ok(p.clone()),
            ProfileSource::Table(path) => read_table(path),
        }
    }
}

fn number(key: &str, token: &str) -> Result<f64, String> {
    token
        .trim()
        .parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| format!("invalid number '{token}' for {key}"))
}

/// Splits `k1=v1,k2=v2` and checks the keys against `expected`, in order.
fn params(body: &str, expected: &[&str]) -> Result<Vec<f64>, String> {
    let mut values = vec![None; expected.len()];
    for part in body.split(',').filter(|s| !s.is_empty()) {
        let (k, v) = part.split_once('=').ok_or_else(|| format!("expected key=value, got '{part}'"))?;
        let k = k.trim();
        let i = expected
            .iter()
            .position(|e| *e == k)
            .ok_or_else(|| format!("unexpected parameter '{k}'"))?;
        if values[i].is_some() {
            return Err(format!("parameter '{k}' given twice"));
        }
        values[i] = Some(number(k, v)?);
    }
    expected
        .iter()
        .zip(values)
        .map(|(k, v)| v.ok_or_else(|| format!("missing parameter '{k}'")))
        .collect()
}

impl FromStr for ProfileSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<ProfileSpec, String> {
        let (family, body) = s.split_once(':').ok_or_else(|| format!("expected <family>:<params>, got '{s}'"))?;
        let profile = match family {
            "exp" => DecayProfile::exponential(params(body, &["a"])?[0]),
            "pow" => DecayProfile::power_law(params(body, &["p"])?[0]),
            "sexp" => {
                let v = params(body, &["beta", "c"])?;
                DecayProfile::stretched_exp(v[0], v[1])
            }
            "table" => {
                if body.is_empty() {
                    return Err("table spec needs a path".into());
                }
                return Ok(ProfileSpec { raw: s.into(), source: ProfileSource::Table(body.into()) });
            }
            other => return Err(format!("unknown profile family '{other}'")),
        };
        let profile = profile.map_err(|e| e.to_string())?;
        Ok(ProfileSpec { raw: s.into(), source: ProfileSource::Closed(profile) })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MapSpec {
    pub raw: String,
    pub map: MapExpr,
}

fn parse_map(s: &str) -> Result<MapExpr, String> {
    let s = s.trim();
    if s == "id" {
        return Ok(MapExpr::Identity);
    }
    let (kind, body) = s.split_once(':').ok_or_else(|| format!("unknown map '{s}'"))?;
    let map = match kind {
        "scale" => MapExpr::scale(number("scale", body)?),
        "rot" => MapExpr::rotate(number("rot", body)?.to_radians()),
        "shear-spiral" => shear_spiral_map(params(body, &["gamma"])?[0]),
        "compose" => {
            let parts = body.split('|').map(parse_map).collect::<Result<Vec<_>, _>>()?;
            MapExpr::compose(parts)
        }
        other => return Err(format!("unknown map '{other}'")),
    };
    map.map_err(|e| e.to_string())
}

impl FromStr for MapSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<MapSpec, String> {
        Ok(MapSpec { raw: s.into(), map: parse_map(s)? })
    }
}

impl fmt::Display for ProfileSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.raw)
    }
}

impl fmt::Display for MapSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.raw)
    }
}

impl Serialize for ProfileSpec {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.raw)
    }
}

impl Serialize for MapSpec {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.raw)
    }
}

/// `x,y` pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Vec2(pub f64, pub f64);

impl FromStr for Vec2 {
    type Err = String;

    fn from_str(s: &str) -> Result<Vec2, String> {
        let (x, y) = s.split_once(',').ok_or_else(|| format!("expected x,y, got '{s}'"))?;
        Ok(Vec2(number("x", x)?, number("y", y)?))
    }
}

/// Comma-separated reals.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RealList(pub Vec<f64>);

impl FromStr for RealList {
    type Err = String;

    fn from_str(s: &str) -> Result<RealList, String> {
        s.split(',').map(|t| number("list entry", t)).collect::<Result<_, _>>().map(RealList)
    }
}

/// Comma-separated positive integers.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IndexList(pub Vec<usize>);

impl FromStr for IndexList {
    type Err = String;

    fn from_str(s: &str) -> Result<IndexList, String> {
        s.split(',')
            .map(|t| t.trim().parse::<usize>().map_err(|_| format!("invalid index '{t}'")))
            .collect::<Result<_, _>>()
            .map(IndexList)
    }
}
