use std::collections::HashMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::{Path, PathPolynomial, Quiver, QuiverPresentation, VertexLabel};
use crate::error::{Error, Result};
use crate::field::{common_order, Cyclotomic};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArrowJson {
    pub id: usize,
    pub name: String,
    pub source: VertexLabel,
    pub target: VertexLabel,
    #[serde(default = "default_grade")]
    pub grade: usize,
}

fn default_grade() -> usize {
    1
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub coeff: Cyclotomic,
    pub path: Vec<usize>,
}

/// Wire form of a presentation. Arrow endpoints are vertex labels; relation
/// paths list arrow ids.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PresentationJson {
    pub vertices: Vec<VertexLabel>,
    pub arrows: Vec<ArrowJson>,
    pub relations: Vec<Vec<TermJson>>,
}

impl From<&QuiverPresentation> for PresentationJson {
    fn from(p: &QuiverPresentation) -> Self {
        let q = &p.quiver;
        PresentationJson {
            vertices: q.vertices.clone(),
            arrows: q
                .arrows
                .iter()
                .enumerate()
                .map(|(id, a)| ArrowJson {
                    id,
                    name: a.name.clone(),
                    source: q.vertices[a.source].clone(),
                    target: q.vertices[a.target].clone(),
                    grade: a.grade,
                })
                .collect(),
            relations: p
                .relations()
                .iter()
                .map(|r| r.terms().iter().map(|(path, c)| TermJson { coeff: c.clone(), path: path.arrows.clone() }).collect())
                .collect(),
        }
    }
}

impl TryFrom<PresentationJson> for QuiverPresentation {
    type Error = Error;

    fn try_from(j: PresentationJson) -> Result<Self> {
        let mut q = Quiver::new();
        let mut vindex = HashMap::new();
        for v in j.vertices {
            if vindex.insert(v.clone(), q.vertex_count()).is_some() {
                return Err(Error::InvalidPresentation(format!("duplicate vertex label {v}")));
            }
            q.add_vertex(v);
        }
        let lookup =
            |l: &VertexLabel| vindex.get(l).copied().ok_or_else(|| Error::InvalidPresentation(format!("unknown vertex {l}")));
        let mut aindex = HashMap::new();
        for a in &j.arrows {
            if a.grade == 0 {
                return Err(Error::InvalidPresentation(format!("arrow {} has grade 0", a.id)));
            }
            let (s, t) = (lookup(&a.source)?, lookup(&a.target)?);
            if aindex.insert(a.id, q.arrows.len()).is_some() {
                return Err(Error::InvalidPresentation(format!("duplicate arrow id {}", a.id)));
            }
            q.add_arrow(a.name.clone(), s, t, a.grade);
        }
        let order = common_order(j.relations.iter().flatten().map(|t| t.coeff.order()));
        let mut rels = Vec::with_capacity(j.relations.len());
        for (k, rel) in j.relations.into_iter().enumerate() {
            let mut terms = Vec::with_capacity(rel.len());
            for t in rel {
                let arrows = t
                    .path
                    .iter()
                    .map(|id| {
                        aindex
                            .get(id)
                            .copied()
                            .ok_or_else(|| Error::InvalidPresentation(format!("relation {k}: unknown arrow id {id}")))
                    })
                    .collect::<Result<Vec<_>>>()?;
                let first = *arrows.first().ok_or_else(|| Error::InvalidPresentation(format!("relation {k}: empty path")))?;
                terms.push((Path::new(q.arrows[first].source, arrows), t.coeff.embed(order)?));
            }
            rels.push(PathPolynomial::from_terms(terms));
        }
        QuiverPresentation::new(q, rels, order)
    }
}

pub fn json_export(p: &QuiverPresentation) -> String {
    serde_json::to_string_pretty(&PresentationJson::from(p)).expect("presentation serializes")
}

pub fn parse_presentation(text: &str) -> Result<QuiverPresentation> {
    let j: PresentationJson = serde_json::from_str(text)
        .map_err(|e| Error::InvalidPresentation(format!("line {}, column {}: {e}", e.line(), e.column())))?;
    QuiverPresentation::try_from(j)
}

fn path_text(q: &Quiver, p: &Path) -> String {
    if p.arrows.is_empty() {
        return format!("e{}", q.vertices[p.start]);
    }
    p.arrows.iter().map(|&a| q.arrows[a].name.as_str()).collect::<Vec<_>>().join(" ")
}

fn coeff_prefix(c: &Cyclotomic) -> String {
    match c.as_rational() {
        Some(q) if q == &num_rational::BigRational::from_integer(1.into()) => String::new(),
        Some(q) if q == &num_rational::BigRational::from_integer((-1).into()) => "-".into(),
        Some(q) => format!("{q} "),
        None => format!("({c}) "),
    }
}

/// One relation in equation style, e.g. `x1 x3 = -x3 x1` or `x1 x1 = 0`.
pub fn render_relation(q: &Quiver, rel: &PathPolynomial) -> String {
    let terms = rel.terms();
    match terms {
        [] => "0 = 0".into(),
        [(p, c)] => format!("{}{} = 0", coeff_prefix(c), path_text(q, p)),
        [(p1, c1), (p2, c2)] => format!("{}{} = {}{}", coeff_prefix(c1), path_text(q, p1), coeff_prefix(&-c2), path_text(q, p2)),
        _ => {
            let mut s = String::new();
            for (k, (p, c)) in terms.iter().enumerate() {
                let neg = c.as_rational().is_some_and(|r| r < &num_rational::BigRational::from_integer(0.into()));
                if k > 0 {
                    s.push_str(if neg { " - " } else { " + " });
                    let c = if neg { -c } else { c.clone() };
                    let _ = write!(s, "{}{}", coeff_prefix(&c), path_text(q, p));
                } else {
                    let _ = write!(s, "{}{}", coeff_prefix(c), path_text(q, p));
                }
            }
            s.push_str(" = 0");
            s
        }
    }
}

fn relation_lines(p: &QuiverPresentation) -> Vec<String> {
    let q = &p.quiver;
    p.relations()
        .iter()
        .map(|r| {
            let (s, t, g) = r.signature(q).expect("nonzero relation");
            format!("{}    [{} -> {}, grade {}]", render_relation(q, r), q.vertices[s], q.vertices[t], g)
        })
        .collect()
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Graphviz digraph; relations are listed in a leading comment block.
pub fn dot_export(p: &QuiverPresentation) -> String {
    let q = &p.quiver;
    let mut out = String::from("digraph {\n");
    let rels = relation_lines(p);
    if !rels.is_empty() {
        out.push_str("  // relations:\n");
        for line in rels {
            let _ = writeln!(out, "  //   {line}");
        }
    }
    for (i, v) in q.vertices.iter().enumerate() {
        let _ = writeln!(out, "  n{i} [label=\"{}\"];", dot_escape(&v.to_string()));
    }
    for a in &q.arrows {
        let label = if a.grade == 1 { a.name.clone() } else { format!("{} (grade {})", a.name, a.grade) };
        let _ = writeln!(out, "  n{} -> n{} [label=\"{}\"];", a.source, a.target, dot_escape(&label));
    }
    out.push_str("}\n");
    out
}

/// Plain-text listing in the style of hand-drawn presentations.
pub fn text_export(p: &QuiverPresentation) -> String {
    let q = &p.quiver;
    let mut out = String::new();
    let vs: Vec<String> = q.vertices.iter().map(ToString::to_string).collect();
    let _ = writeln!(out, "vertices ({}): {}", vs.len(), vs.join(", "));
    let _ = writeln!(out, "arrows ({}):", q.arrows.len());
    for a in &q.arrows {
        let grade = if a.grade == 1 { String::new() } else { format!("  (grade {})", a.grade) };
        let _ = writeln!(out, "  {}: {} -> {}{grade}", a.name, q.vertices[a.source], q.vertices[a.target]);
    }
    let rels = relation_lines(p);
    let _ = writeln!(out, "relations ({}):", rels.len());
    for line in rels {
        let _ = writeln!(out, "  {line}");
    }
    out
}
