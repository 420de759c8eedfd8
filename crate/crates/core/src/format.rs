//! JSON space and instance files. The schema is described in `docs/format.md`.
//!
//! Finite spaces normalize to the explicit form (members listed in ascending
//! point order, covers and members in their given order); lazy spaces keep
//! their generating parameters. The fingerprint is the SHA-256 of the
//! normalized document's compact JSON.

use std::str::FromStr;
use std::sync::Arc;

use num_rational::Rational64;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::bits::PointSet;
use crate::cover::{Cover, FiniteCover, FiniteSpace, Multicover};
use crate::error::{Error, Result};
use crate::game::GameConfig;
use crate::spaces::{
    finite_group_space_radii, group_multicover, probe_box, FiniteGroup, FiniteMetricSpace, FreeGroup, GroupCover,
    LatticeCover, Norm, Side, Word, DEFAULT_PROBE_BOX,
};

pub const FORMAT_VERSION: u32 = 1;

fn version() -> u32 {
    FORMAT_VERSION
}

/// A whole input file: a space, an optional probe and an optional game.
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Document {
    #[serde(default = "version")]
    pub version: u32,
    pub space: SpaceDesc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub probe: Option<ProbeDesc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub game: Option<GameConfig>,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoverDesc {
    #[serde(default)]
    pub label: String,
    pub members: Vec<Vec<usize>>,
}

/// A distance entry: an integer or a rational string such as `"3/2"`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Scalar {
    Int(i64),
    Text(String),
}

impl Scalar {
    fn value(&self) -> std::result::Result<Rational64, String> {
        match self {
            Scalar::Int(i) => Ok(Rational64::from_integer(*i)),
            Scalar::Text(s) => Rational64::from_str(s.trim()).map_err(|e| format!("`{s}`: {e}")),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SpaceDesc {
    /// Points `0..points`, covers as member lists.
    Explicit { points: usize, covers: Vec<CoverDesc> },
    /// Open balls of a finite (pseudo)metric, one cover per radius.
    Metric { dist: Vec<Vec<Scalar>>, radii: Vec<Scalar> },
    /// Translates of word-metric balls in a multiplication table.
    FiniteGroup {
        table: Vec<Vec<usize>>,
        generators: Vec<usize>,
        radii: Vec<u64>,
        side: Side,
    },
    /// `Z/n` with generator 1.
    Cyclic { order: usize, radii: Vec<u64>, side: Side },
    /// Closed balls of `Zᵈ`.
    Lattice { dim: usize, norm: Norm, radii: Vec<u64> },
    /// Word-ball translates in the free group of the given rank.
    FreeGroup { rank: usize, radii: Vec<u64>, side: Side },
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ProbeDesc {
    Points { points: Vec<usize> },
    /// `[−m, m]ᵈ` in a lattice.
    Box { m: u64 },
    /// All words of length at most `length`.
    Words { length: u64 },
}

/// A loaded space.
#[derive(Clone, Debug)]
pub enum Space {
    Finite(FiniteSpace),
    Lattice { dim: usize, multicover: Multicover<LatticeCover> },
    Free { group: Arc<FreeGroup>, multicover: Multicover<GroupCover<FreeGroup>> },
}

impl Space {
    pub fn finite(&self) -> Option<&FiniteSpace> {
        match self {
            Space::Finite(s) => Some(s),
            _ => None,
        }
    }

    pub fn n_covers(&self) -> usize {
        match self {
            Space::Finite(s) => s.n_covers(),
            Space::Lattice { multicover, .. } => multicover.len(),
            Space::Free { multicover, .. } => multicover.len(),
        }
    }
}

/// Parses a document, reporting schema errors with a JSON pointer.
pub fn parse(text: &str) -> Result<Document> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let doc: Document = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let pointer = if path == "." { String::new() } else { pointer_of(&path) };
        let err = Error::format(pointer, e.inner().to_string());
        match path.as_str() {
            "space" | "probe" => refine(text, &path).unwrap_or(err),
            _ => err,
        }
    })?;
    if doc.version != FORMAT_VERSION {
        return Err(Error::format("/version", format!("unsupported version {}", doc.version)));
    }
    Ok(doc)
}

/// Mirrors of the tagged variants. Internally tagged enums buffer their
/// input, which hides the path below the tag; these recover it.
mod shape {
    use serde::de::DeserializeOwned;
    use serde::Deserialize;

    use super::{CoverDesc, Scalar};
    use crate::spaces::{Norm, Side};

    #[derive(Deserialize)]
    #[serde(deny_unknown_fields)]
    #[allow(dead_code)]
    struct Explicit {
        points: usize,
        covers: Vec<CoverDesc>,
    }

    #[derive(Deserialize)]
    #[serde(deny_unknown_fields)]
    #[allow(dead_code)]
    struct Metric {
        dist: Vec<Vec<Scalar>>,
        radii: Vec<Scalar>,
    }

    #[derive(Deserialize)]
    #[serde(deny_unknown_fields)]
    #[allow(dead_code)]
    struct FiniteGroup {
        table: Vec<Vec<usize>>,
        generators: Vec<usize>,
        radii: Vec<u64>,
        side: Side,
    }

    #[derive(Deserialize)]
    #[serde(deny_unknown_fields)]
    #[allow(dead_code)]
    struct Cyclic {
        order: usize,
        radii: Vec<u64>,
        side: Side,
    }

    #[derive(Deserialize)]
    #[serde(deny_unknown_fields)]
    #[allow(dead_code)]
    struct Lattice {
        dim: usize,
        norm: Norm,
        radii: Vec<u64>,
    }

    #[derive(Deserialize)]
    #[serde(deny_unknown_fields)]
    #[allow(dead_code)]
    struct FreeGroup {
        rank: usize,
        radii: Vec<u64>,
        side: Side,
    }

    #[derive(Deserialize)]
    #[serde(deny_unknown_fields)]
    #[allow(dead_code)]
    struct Points {
        points: Vec<usize>,
    }

    #[derive(Deserialize)]
    #[serde(deny_unknown_fields)]
    #[allow(dead_code)]
    struct Box {
        m: u64,
    }

    #[derive(Deserialize)]
    #[serde(deny_unknown_fields)]
    #[allow(dead_code)]
    struct Words {
        length: u64,
    }

    fn first<T: DeserializeOwned>(body: &serde_json::Value) -> Option<(String, String)> {
        serde_path_to_error::deserialize::<_, T>(body)
            .err()
            .map(|e| (e.path().to_string(), e.inner().to_string()))
    }

    /// The first error inside the body of variant `kind`, as (path, message).
    pub(super) fn check(field: &str, kind: &str, body: &serde_json::Value) -> Option<(String, String)> {
        match (field, kind) {
            ("space", "explicit") => first::<Explicit>(body),
            ("space", "metric") => first::<Metric>(body),
            ("space", "finite_group") => first::<FiniteGroup>(body),
            ("space", "cyclic") => first::<Cyclic>(body),
            ("space", "lattice") => first::<Lattice>(body),
            ("space", "free_group") => first::<FreeGroup>(body),
            ("probe", "points") => first::<Points>(body),
            ("probe", "box") => first::<Box>(body),
            ("probe", "words") => first::<Words>(body),
            _ => None,
        }
    }
}

/// `covers[0].members` becomes `/covers/0/members`.
fn pointer_of(path: &str) -> String {
    let mut out = String::from("/");
    out.push_str(&path.replace('.', "/").replace('[', "/").replace(']', ""));
    out
}

fn refine(text: &str, field: &str) -> Option<Error> {
    let value: serde_json::Value = serde_json::from_str(text).ok()?;
    let mut body = value.get(field)?.as_object()?.clone();
    let kind = body.remove("kind")?;
    let kind = kind.as_str()?;
    let (path, message) = shape::check(field, kind, &serde_json::Value::Object(body))?;
    let pointer = if path == "." {
        format!("/{field}")
    } else {
        format!("/{field}{}", pointer_of(&path))
    };
    Some(Error::format(pointer, message))
}

fn at(pointer: &str) -> impl Fn(Error) -> Error + '_ {
    move |e| match e {
        Error::Format { .. } => e,
        other => Error::format(pointer, other.to_string()),
    }
}

impl SpaceDesc {
    pub fn build(&self) -> Result<Space> {
        match self {
            SpaceDesc::Explicit { points, covers } => {
                let built = covers
                    .iter()
                    .enumerate()
                    .map(|(i, c)| {
                        let label = if c.label.is_empty() { format!("u{i}") } else { c.label.clone() };
                        FiniteCover::from_lists(label, *points, &c.members).map_err(at(&format!("/space/covers/{i}")))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(Space::Finite(FiniteSpace::new(*points, built).map_err(at("/space"))?))
            }
            SpaceDesc::Metric { dist, radii } => {
                let d = dist
                    .iter()
                    .enumerate()
                    .map(|(i, row)| {
                        row.iter()
                            .enumerate()
                            .map(|(j, s)| s.value().map_err(|m| Error::format(format!("/space/dist/{i}/{j}"), m)))
                            .collect::<Result<Vec<_>>>()
                    })
                    .collect::<Result<Vec<_>>>()?;
                let r = radii
                    .iter()
                    .enumerate()
                    .map(|(i, s)| s.value().map_err(|m| Error::format(format!("/space/radii/{i}"), m)))
                    .collect::<Result<Vec<_>>>()?;
                let m = FiniteMetricSpace::new(d).map_err(at("/space/dist"))?;
                Ok(Space::Finite(crate::spaces::metric_multicover(&m, &r).map_err(at("/space/radii"))?))
            }
            SpaceDesc::FiniteGroup { table, generators, radii, side } => {
                let g = FiniteGroup::new(table.clone(), generators.clone()).map_err(at("/space/table"))?;
                Ok(Space::Finite(finite_group_space_radii(&g, radii, *side).map_err(at("/space/radii"))?))
            }
            SpaceDesc::Cyclic { order, radii, side } => {
                let g = FiniteGroup::cyclic(*order).map_err(at("/space/order"))?;
                Ok(Space::Finite(finite_group_space_radii(&g, radii, *side).map_err(at("/space/radii"))?))
            }
            SpaceDesc::Lattice { dim, norm, radii } => {
                if *dim == 0 {
                    return Err(Error::format("/space/dim", "dimension must be positive"));
                }
                if radii.is_empty() {
                    return Err(Error::format("/space/radii", "no radii"));
                }
                let covers = radii.iter().map(|&r| LatticeCover::new(*dim, r, *norm)).collect();
                Ok(Space::Lattice {
                    dim: *dim,
                    multicover: Multicover::new(covers),
                })
            }
            SpaceDesc::FreeGroup { rank, radii, side } => {
                let group = Arc::new(FreeGroup::new(*rank).map_err(at("/space/rank"))?);
                let multicover = group_multicover(group.clone(), radii, *side).map_err(at("/space/radii"))?;
                Ok(Space::Free { group, multicover })
            }
        }
    }

    /// The explicit form of a finite space; lazy spaces are returned unchanged.
    pub fn normalize(&self) -> Result<SpaceDesc> {
        match self.build()? {
            Space::Finite(s) => Ok(explicit(&s)),
            _ => Ok(self.clone()),
        }
    }
}

/// The explicit description of a finite space.
pub fn explicit(space: &FiniteSpace) -> SpaceDesc {
    SpaceDesc::Explicit {
        points: space.n_points(),
        covers: space
            .covers()
            .iter()
            .map(|c| CoverDesc {
                label: c.label().to_string(),
                members: c.members().iter().map(|m| m.to_vec()).collect(),
            })
            .collect(),
    }
}

/// A finite probe as point indices.
pub fn finite_probe(doc: &Document, space: &FiniteSpace) -> Result<PointSet> {
    match &doc.probe {
        None => Ok(space.ground()),
        Some(ProbeDesc::Points { points }) => {
            if let Some(&p) = points.iter().find(|&&p| p >= space.n_points()) {
                return Err(Error::format("/probe/points", format!("point {p} outside the ground set")));
            }
            Ok(points.iter().collect())
        }
        Some(_) => Err(Error::format("/probe/kind", "finite spaces take a list of points")),
    }
}

/// Lattice probe points, `[−20, 20]ᵈ` by default. `box_override` replaces the file's box.
pub fn lattice_probe(doc: &Document, dim: usize, box_override: Option<u64>) -> Result<Vec<Vec<i64>>> {
    let m = match (&doc.probe, box_override) {
        (_, Some(m)) => m,
        (None, None) => DEFAULT_PROBE_BOX,
        (Some(ProbeDesc::Box { m }), None) => *m,
        (Some(_), None) => return Err(Error::format("/probe/kind", "lattices take a box probe")),
    };
    Ok(probe_box(dim, m))
}

/// Free-group probe: all words up to the given length (3 by default).
pub fn word_probe(doc: &Document, group: &FreeGroup) -> Result<Vec<Word>> {
    let length = match &doc.probe {
        None => 3,
        Some(ProbeDesc::Words { length }) => *length,
        Some(_) => return Err(Error::format("/probe/kind", "free groups take a word-length probe")),
    };
    use crate::spaces::Group;
    group
        .ball(length, crate::spaces::group::BALL_LIMIT)
        .ok_or_else(|| Error::format("/probe/length", format!("ball of radius {length} is too large")))
}

impl Document {
    /// The same document with its space normalized.
    pub fn normalize(&self) -> Result<Document> {
        Ok(Document {
            version: FORMAT_VERSION,
            space: self.space.normalize()?,
            probe: self.probe.clone(),
            game: self.game.clone(),
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("documents serialize")
    }

    /// Hex SHA-256 of the normalized document.
    pub fn fingerprint(&self) -> Result<String> {
        Ok(fingerprint_bytes(self.normalize()?.to_json().as_bytes()))
    }
}

pub fn fingerprint_bytes(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn explicit_round_trip() {
        let text = r#"{"space": {"kind": "explicit", "points": 3, "covers": [{"members": [[1, 0], [2]]}]}}"#;
        let doc = parse(text).unwrap();
        let norm = doc.normalize().unwrap();
        let SpaceDesc::Explicit { covers, .. } = &norm.space else { panic!() };
        assert_eq!(covers[0].members, vec![vec![0, 1], vec![2]]);
        assert_eq!(covers[0].label, "u0");
        assert_eq!(parse(&norm.to_json()).unwrap(), norm);
        assert_eq!(doc.fingerprint().unwrap(), norm.fingerprint().unwrap());
        assert_eq!(doc.fingerprint().unwrap().len(), 64);
    }

    #[test]
    fn errors_point_at_the_field() {
        let err = parse(r#"{"space": {"kind": "explicit", "points": 3, "covers": [{"members": [[0], "x"]}]}}"#).unwrap_err();
        let Error::Format { pointer, .. } = err else { panic!() };
        assert_eq!(pointer, "/space/covers/0/members/1");
        let err = parse(r#"{"space": {"kind": "cyclic", "order": 4, "radii": [1]}, "probe": {"kind": "box", "m": -1}}"#).unwrap_err();
        let Error::Format { pointer, message } = err else { panic!() };
        assert_eq!(pointer, "/space");
        assert!(message.contains("side"), "{message}");
        let err = parse(r#"{"space": {"kind": "lattice", "dim": 1, "norm": "max", "radii": [1]}, "probe": {"kind": "box", "m": -1}}"#).unwrap_err();
        let Error::Format { pointer, .. } = err else { panic!() };
        assert_eq!(pointer, "/probe/m");
        let doc = parse(r#"{"space": {"kind": "explicit", "points": 3, "covers": [{"members": [[0], [1]]}]}}"#).unwrap();
        let Err(Error::Format { pointer, .. }) = doc.space.build() else { panic!() };
        assert_eq!(pointer, "/space/covers/0");
    }

    #[test]
    fn finite_kinds_normalize_alike() {
        let cyc = parse(r#"{"space": {"kind": "cyclic", "order": 4, "radii": [1], "side": "left"}}"#).unwrap();
        let Space::Finite(s) = cyc.space.build().unwrap() else { panic!() };
        let again = Document {
            version: 1,
            space: explicit(&s),
            probe: None,
            game: None,
        };
        assert_eq!(cyc.fingerprint().unwrap(), again.fingerprint().unwrap());
        let metric = parse(r#"{"space": {"kind": "metric", "dist": [[0, "1/2"], ["1/2", 0]], "radii": [1]}}"#).unwrap();
        assert_eq!(metric.space.build().unwrap().finite().unwrap().n_points(), 2);
    }

    #[test]
    fn lazy_spaces_load() {
        let lat = parse(r#"{"space": {"kind": "lattice", "dim": 2, "norm": "max", "radii": [1, 2]}, "probe": {"kind": "box", "m": 2}}"#).unwrap();
        let Space::Lattice { dim, multicover } = lat.space.build().unwrap() else { panic!() };
        assert_eq!(multicover.len(), 2);
        assert_eq!(lattice_probe(&lat, dim, None).unwrap().len(), 25);
        let free = parse(r#"{"space": {"kind": "free_group", "rank": 2, "radii": [1], "side": "right"}, "probe": {"kind": "words", "length": 1}}"#).unwrap();
        let Space::Free { group, .. } = free.space.build().unwrap() else { panic!() };
        assert_eq!(word_probe(&free, &group).unwrap().len(), 5);
    }
}
