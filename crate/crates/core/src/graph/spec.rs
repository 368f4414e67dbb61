//! Plain-text and JSON graph descriptions.
//!
//! Text format, one directive per line, `#` starts a comment:
//!
//! ```text
//! graph bubble valence 4
//! vertex a
//! vertex b
//! internal e1 a b scale 1
//! internal e2 a b scale 2
//! external x1 a
//! external x2 a
//! external x3 b
//! external x4 b
//! ```
//!
//! `vertex <id> biped` declares a two-valent biped vertex. Scales are
//! optional but must be given on every internal edge or on none. Several
//! `graph` blocks may share a file.

use serde::{Deserialize, Serialize};

use super::{AssignedGraph, FeynmanGraph, Scale, ScaleAssignment, VertexKind, EXTERNAL_SCALE};
use crate::error::{Error, Result};

/// A parsed graph with its identifiers.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphSpec {
    pub name: String,
    pub valence: u32,
    pub vertices: Vec<VertexSpec>,
    pub internal: Vec<EdgeSpec>,
    pub external: Vec<LegSpec>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexSpec {
    pub id: String,
    pub kind: VertexKind,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeSpec {
    pub id: String,
    pub ends: [String; 2],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scale: Option<Scale>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LegSpec {
    pub label: String,
    pub vertex: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scale: Option<Scale>,
}

pub fn parse_text(src: &str) -> Result<Vec<GraphSpec>> {
    let mut out: Vec<GraphSpec> = Vec::new();
    for (i, raw) in src.lines().enumerate() {
        let line = i + 1;
        let text = raw.split('#').next().unwrap_or("").trim();
        if text.is_empty() {
            continue;
        }
        let err = |msg: &str| Error::Parse { line, msg: msg.to_string() };
        let tok: Vec<&str> = text.split_whitespace().collect();
        let int = |s: &str| s.parse::<i64>().map_err(|_| err(&format!("expected an integer, got `{s}`")));
        let scale_tail = |rest: &[&str]| -> Result<Option<Scale>> {
            match rest {
                [] => Ok(None),
                ["scale", s] => Ok(Some(int(s)? as Scale)),
                _ => Err(err("expected `scale <i>` or end of line")),
            }
        };
        if tok[0] == "graph" {
            let (name, valence) = match tok.as_slice() {
                [_, name] => (name.to_string(), 4),
                [_, name, "valence", k] => (name.to_string(), int(k)?),
                _ => return Err(err("expected `graph <name> [valence <k>]`")),
            };
            if valence <= 0 {
                return Err(err("valence must be positive"));
            }
            out.push(GraphSpec {
                name,
                valence: valence as u32,
                vertices: vec![],
                internal: vec![],
                external: vec![],
            });
            continue;
        }
        let g = out.last_mut().ok_or_else(|| err("directive before any `graph` line"))?;
        match tok[0] {
            "vertex" => {
                let kind = match tok.as_slice() {
                    [_, _] => VertexKind::Interaction,
                    [_, _, "biped"] => VertexKind::Biped,
                    _ => return Err(err("expected `vertex <id> [biped]`")),
                };
                if g.vertices.iter().any(|v| v.id == tok[1]) {
                    return Err(err(&format!("duplicate vertex `{}`", tok[1])));
                }
                g.vertices.push(VertexSpec { id: tok[1].to_string(), kind });
            }
            "internal" => {
                if tok.len() < 4 {
                    return Err(err("expected `internal <id> <v1> <v2> [scale <i>]`"));
                }
                let scale = scale_tail(&tok[4..])?;
                g.internal.push(EdgeSpec {
                    id: tok[1].to_string(),
                    ends: [tok[2].to_string(), tok[3].to_string()],
                    scale,
                });
            }
            "external" => {
                if tok.len() < 3 {
                    return Err(err("expected `external <label> <v> [scale <i>]`"));
                }
                let scale = scale_tail(&tok[3..])?;
                g.external.push(LegSpec { label: tok[1].to_string(), vertex: tok[2].to_string(), scale });
            }
            other => return Err(err(&format!("unknown directive `{other}`"))),
        }
    }
    Ok(out)
}

pub fn parse_json(src: &str) -> Result<Vec<GraphSpec>> {
    let value: serde_json::Value =
        serde_json::from_str(src).map_err(|e| Error::Parse { line: e.line(), msg: e.to_string() })?;
    let parse = |v: serde_json::Value| {
        serde_json::from_value::<GraphSpec>(v).map_err(|e| Error::Parse { line: 0, msg: e.to_string() })
    };
    match value {
        serde_json::Value::Array(items) => items.into_iter().map(parse).collect(),
        v => Ok(vec![parse(v)?]),
    }
}

/// Parse either format, guessing JSON from a leading `{` or `[`.
pub fn parse_any(src: &str) -> Result<Vec<GraphSpec>> {
    match src.trim_start().chars().next() {
        Some('{') | Some('[') => parse_json(src),
        _ => parse_text(src),
    }
}

impl GraphSpec {
    fn vertex_index(&self, id: &str) -> Result<usize> {
        self.vertices
            .iter()
            .position(|v| v.id == id)
            .ok_or_else(|| Error::Malformed(format!("unknown vertex `{id}`")))
    }

    pub fn to_graph(&self) -> Result<FeynmanGraph> {
        let kinds = self.vertices.iter().map(|v| v.kind).collect();
        let edges = self
            .internal
            .iter()
            .map(|e| Ok([self.vertex_index(&e.ends[0])?, self.vertex_index(&e.ends[1])?]))
            .collect::<Result<Vec<_>>>()?;
        let legs = self.external.iter().map(|l| self.vertex_index(&l.vertex)).collect::<Result<Vec<_>>>()?;
        FeynmanGraph::new(self.valence, kinds, edges, legs)
    }

    /// Whether scales were given (on every internal edge).
    pub fn has_scales(&self) -> Result<bool> {
        let given = self.internal.iter().filter(|e| e.scale.is_some()).count();
        if given != 0 && given != self.internal.len() {
            return Err(Error::Malformed("scales must be given on all internal edges or none".into()));
        }
        Ok(given > 0)
    }

    /// Assigned graph, labeled by leg order. Missing scales default to 0.
    pub fn to_assigned(&self, rho: Scale) -> Result<AssignedGraph> {
        self.has_scales()?;
        let graph = self.to_graph()?;
        let scales = self.internal.iter().map(|e| e.scale.unwrap_or(0)).collect();
        let assignment = ScaleAssignment::new(scales, rho)?;
        let leg_scales = self.external.iter().map(|l| l.scale.unwrap_or(EXTERNAL_SCALE)).collect();
        AssignedGraph::new(graph, &assignment)?.with_leg_scales(leg_scales).map(|g| g.labeled())
    }

    /// Description of an assigned graph with generated identifiers.
    pub fn from_assigned(name: &str, g: &AssignedGraph) -> GraphSpec {
        let vid = |v: usize| format!("v{v}");
        GraphSpec {
            name: name.to_string(),
            valence: g.graph().valence(),
            vertices: g
                .graph()
                .kinds()
                .iter()
                .enumerate()
                .map(|(v, &kind)| VertexSpec { id: vid(v), kind })
                .collect(),
            internal: g
                .edges()
                .iter()
                .zip(g.scales())
                .enumerate()
                .map(|(i, (&[a, b], &s))| EdgeSpec { id: format!("e{i}"), ends: [vid(a), vid(b)], scale: Some(s) })
                .collect(),
            external: g
                .legs()
                .iter()
                .zip(g.leg_scales())
                .enumerate()
                .map(|(i, (&v, &s))| LegSpec {
                    label: format!("x{}", i + 1),
                    vertex: vid(v),
                    scale: (s != EXTERNAL_SCALE).then_some(s),
                })
                .collect(),
        }
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("graph {} valence {}\n", self.name, self.valence);
        for v in &self.vertices {
            match v.kind {
                VertexKind::Interaction => s += &format!("vertex {}\n", v.id),
                VertexKind::Biped => s += &format!("vertex {} biped\n", v.id),
            }
        }
        for e in &self.internal {
            s += &format!("internal {} {} {}", e.id, e.ends[0], e.ends[1]);
            if let Some(k) = e.scale {
                s += &format!(" scale {k}");
            }
            s.push('\n');
        }
        for l in &self.external {
            s += &format!("external {} {}", l.label, l.vertex);
            if let Some(k) = l.scale {
                s += &format!(" scale {k}");
            }
            s.push('\n');
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    const BUBBLE: &str = "\
# two vertices, two propagators
graph bubble valence 4
vertex a
vertex b
internal e1 a b scale 1
internal e2 a b scale 2   # the harder line
external x1 a
external x2 a
external x3 b
external x4 b
";

    #[test]
    fn parses_the_bubble() {
        let specs = parse_text(BUBBLE).unwrap();
        assert_eq!(specs.len(), 1);
        let g = specs[0].to_assigned(2).unwrap();
        assert_eq!(g.unlabeled().canonical(), fixtures::bubble(1, 2).canonical());
    }

    #[test]
    fn text_round_trip() {
        for g in fixtures::zoo() {
            let spec = GraphSpec::from_assigned("g", &g);
            let back = parse_text(&spec.to_text()).unwrap();
            assert_eq!(back, vec![spec]);
        }
    }

    #[test]
    fn json_round_trip() {
        let spec = GraphSpec::from_assigned("b", &fixtures::bubble(0, 1));
        let js = serde_json::to_string(&spec).unwrap();
        assert_eq!(parse_any(&js).unwrap(), vec![spec]);
    }

    #[test]
    fn reports_line_numbers() {
        let err = parse_text("graph g\nvertex a\ninternal e a\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }));
        let err = parse_text("vertex a\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
    }

    #[test]
    fn mixed_scales_rejected() {
        let src = "graph g\nvertex a\nvertex b\ninternal e1 a b scale 1\ninternal e2 a b\n\
                   external x1 a\nexternal x2 a\nexternal x3 b\nexternal x4 b\n";
        let spec = &parse_text(src).unwrap()[0];
        assert!(matches!(spec.to_assigned(3), Err(Error::Malformed(_))));
    }

    #[test]
    fn scale_above_cutoff_rejected() {
        let spec = &parse_text(BUBBLE).unwrap()[0];
        assert_eq!(spec.to_assigned(1).unwrap_err(), Error::ScaleOutOfRange { scale: 2, rho: 1 });
    }
}
