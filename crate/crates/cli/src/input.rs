//! Group specifications and the JSON file formats, all 1-based.
//!
//! ```text
//! spec := catalog-name | generator-list | "wr(" spec "," spec ")"
//!       | "Sym(" n ")" | "Alt(" n ")" | "Cyc(" n ")" | path-to-group.json
//! ```

use std::fs;
use std::path::Path;

use relkit::notation::{format_permutation, parse_generators, parse_permutation};
use relkit::wreath::wreath_product;
use relkit::{catalog, Error, PermutationGroup, Relation, Subset};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Serialize, Deserialize)]
pub struct GroupFile {
    pub degree: usize,
    pub generators: Vec<String>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct RelationFile {
    pub degree: usize,
    pub sets: Vec<Vec<usize>>,
}

impl GroupFile {
    pub fn from_group(g: &PermutationGroup) -> Self {
        GroupFile {
            degree: g.degree(),
            generators: g.generators().iter().map(format_permutation).collect(),
        }
    }

    pub fn to_group(&self) -> Result<PermutationGroup, CliError> {
        let gens = self
            .generators
            .iter()
            .map(|text| {
                let p = parse_permutation(text)?;
                if p.degree() > self.degree {
                    return Err(Error::DegreeMismatch {
                        left: self.degree,
                        right: p.degree(),
                    });
                }
                Ok(p.extend(self.degree))
            })
            .collect::<Result<Vec<_>, Error>>()?;
        Ok(PermutationGroup::new(self.degree, gens)?)
    }
}

impl RelationFile {
    pub fn from_relation(r: &Relation) -> Self {
        RelationFile {
            degree: r.degree(),
            sets: r.sets().iter().map(|s| s.points().iter().map(|p| p + 1).collect()).collect(),
        }
    }

    pub fn to_relation(&self) -> Result<Relation, CliError> {
        let sets = self
            .sets
            .iter()
            .map(|set| points_to_subset(self.degree, set))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Relation::new(self.degree, sets)?)
    }
}

fn points_to_subset(degree: usize, points: &[usize]) -> Result<Subset, CliError> {
    let zero_based = points
        .iter()
        .map(|&p| {
            if p == 0 || p > degree {
                Err(Error::PointOutOfRange { point: p, degree })
            } else {
                Ok(p - 1)
            }
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Subset::from_points(degree, &zero_based)?)
}

/// Parses `"1,3,4"` (or space separated) into a subset of `0..degree`.
pub fn parse_points(degree: usize, text: &str) -> Result<Subset, CliError> {
    let points = text
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<usize>().map_err(|_| Error::Parse {
                position: 0,
                message: format!("`{t}` is not a point"),
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    points_to_subset(degree, &points)
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Json(format!("{}: {e}", path.display())))
}

pub fn read_relation(path: &Path) -> Result<Relation, CliError> {
    read_json::<RelationFile>(path)?.to_relation()
}

/// Splits `a, b` at the first comma outside parentheses.
fn split_pair(text: &str) -> Option<(&str, &str)> {
    let mut depth = 0i32;
    for (i, c) in text.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => return Some((&text[..i], &text[i + 1..])),
            _ => {}
        }
    }
    None
}

fn family(text: &str) -> Option<PermutationGroup> {
    let (head, rest) = text.split_once('(')?;
    let n: usize = rest.strip_suffix(')')?.trim().parse().ok()?;
    if n == 0 || n > relkit::MAX_DEGREE {
        return None;
    }
    match head.trim() {
        "Sym" => Some(PermutationGroup::symmetric(n)),
        "Alt" => Some(PermutationGroup::alternating(n)),
        "Cyc" => Some(PermutationGroup::cyclic(n)),
        _ => None,
    }
}

pub fn parse_group(spec: &str) -> Result<PermutationGroup, CliError> {
    let spec = spec.trim();
    if spec.ends_with(".json") {
        return read_json::<GroupFile>(Path::new(spec))?.to_group();
    }
    if let Some(inner) = spec.strip_prefix("wr(").and_then(|s| s.strip_suffix(')')) {
        let (k, l) = split_pair(inner).ok_or_else(|| Error::Parse {
            position: 3,
            message: "expected `wr(K, L)`".into(),
        })?;
        let (k, l) = (parse_group(k)?, parse_group(l)?);
        return Ok(wreath_product(&k, &l)?.group);
    }
    if spec.starts_with('(') {
        let (n, gens) = parse_generators(spec)?;
        return Ok(PermutationGroup::new(n, gens)?);
    }
    if let Some(g) = family(spec) {
        return Ok(g);
    }
    Ok(catalog::load(spec)?)
}
