//! Text formats for quiver presentations (`.alg`) and finite-dimensional Hopf
//! algebras (`.hopf`). The grammar is documented in `docs/formats.md`.

use std::fmt::{self, Write as _};

use thiserror::Error;

use crate::graded::{AlgebraPresentation, Arrow, PathRef, Relation, RelationTerm};
use crate::hopf::{GeneratorImages, HopfAlgebra};
use crate::linalg::{Field, Matrix, Scalar};

#[derive(Debug, Error, PartialEq, Eq)]
#[error("line {line}, column {col}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

type Rat = (i64, i64);

#[derive(Clone, Copy, Debug)]
struct Token<'a> {
    text: &'a str,
    col: usize,
}

struct Line<'a> {
    no: usize,
    text: &'a str,
}

impl<'a> Line<'a> {
    fn err(&self, col: usize, msg: impl Into<String>) -> ParseError {
        ParseError {
            line: self.no,
            col,
            msg: msg.into(),
        }
    }

    fn tokens(&self) -> Vec<Token<'a>> {
        let mut out = Vec::new();
        let bytes = self.text.as_bytes();
        let mut i = 0;
        while i < bytes.len() {
            if bytes[i].is_ascii_whitespace() {
                i += 1;
                continue;
            }
            if bytes[i] == b'+' || bytes[i] == b'-' || bytes[i] == b'=' {
                out.push(Token {
                    text: &self.text[i..i + 1],
                    col: i + 1,
                });
                i += 1;
                continue;
            }
            let start = i;
            while i < bytes.len() && !bytes[i].is_ascii_whitespace() && !matches!(bytes[i], b'+' | b'-' | b'=') {
                i += 1;
            }
            out.push(Token {
                text: &self.text[start..i],
                col: start + 1,
            });
        }
        out
    }

    fn col_of(&self, needle: &str) -> usize {
        self.text.find(needle).map_or(1, |i| i + 1)
    }
}

/// Non-empty, comment-stripped lines with 1-based numbers; columns refer to the original line.
fn lines(text: &str) -> impl Iterator<Item = Line<'_>> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let body = raw.split('#').next().unwrap_or("");
        (!body.trim().is_empty()).then_some(Line { no: i + 1, text: body })
    })
}

fn parse_rat(tok: &Token) -> Option<Rat> {
    let (n, d) = match tok.text.split_once('/') {
        Some((n, d)) => (n.parse().ok()?, d.parse().ok()?),
        None => (tok.text.parse().ok()?, 1),
    };
    (d != 0).then_some((n, d))
}

fn rat_to_scalar(field: Field, (n, d): Rat) -> Option<Scalar> {
    let p = field.characteristic();
    if p != 0 && d.unsigned_abs() % p == 0 {
        return None;
    }
    Some(field.frac(n, d))
}

/// One term of a signed combination: coefficient and its `(x)`-separated factors.
struct Term<'a> {
    coef: Rat,
    factors: Vec<Token<'a>>,
}

fn parse_combination<'a>(line: &Line<'a>, toks: &[Token<'a>]) -> Result<Vec<Term<'a>>, ParseError> {
    if toks.is_empty() {
        return Err(line.err(line.text.len() + 1, "expected a combination"));
    }
    let mut terms = Vec::new();
    let mut i = 0;
    while i < toks.len() {
        let mut sign = 1;
        if terms.is_empty() || matches!(toks[i].text, "+" | "-") {
            if toks[i].text == "-" {
                sign = -1;
                i += 1;
            } else if toks[i].text == "+" {
                i += 1;
            }
        } else {
            return Err(line.err(toks[i].col, format!("expected '+' or '-' before '{}'", toks[i].text)));
        }
        let start = i;
        while i < toks.len() && !matches!(toks[i].text, "+" | "-") {
            i += 1;
        }
        let words = &toks[start..i];
        let Some(first) = words.first() else {
            let col = toks.get(i).map_or(line.text.len() + 1, |t| t.col);
            return Err(line.err(col, "missing term"));
        };
        // factors alternate with `(x)`, so a leading coefficient makes the count even
        let (coef, rest) = if words.len() % 2 == 0 {
            let c = parse_rat(first).ok_or_else(|| line.err(first.col, format!("invalid coefficient '{}'", first.text)))?;
            (c, &words[1..])
        } else {
            ((1, 1), words)
        };
        let mut factors = Vec::new();
        for (k, w) in rest.iter().enumerate() {
            let sep = k % 2 == 1;
            if sep != (w.text == "(x)") {
                let what = if sep { "'(x)'" } else { "a factor" };
                return Err(line.err(w.col, format!("expected {what}, found '{}'", w.text)));
            }
            if !sep {
                factors.push(*w);
            }
        }
        if rest.len() % 2 == 0 {
            return Err(line.err(rest.last().map_or(first.col, |t| t.col), "dangling '(x)'"));
        }
        terms.push(Term {
            coef: (sign * coef.0, coef.1),
            factors,
        });
    }
    Ok(terms)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CoactionKind {
    /// `H = A_0` coacting by `(id ⊗ p) Δ`
    DegreeZero,
}

/// Hopf structure on generators, with exact rational coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HopfSections {
    pub comult: Vec<(PathRef, Vec<(Rat, PathRef, PathRef)>)>,
    pub counit: Vec<(PathRef, Rat)>,
    pub antipode: Vec<(PathRef, Vec<(Rat, PathRef)>)>,
}

impl HopfSections {
    pub fn images(&self, field: Field) -> Result<GeneratorImages, String> {
        let s = |r: &Rat| rat_to_scalar(field, *r).ok_or_else(|| format!("coefficient {}/{} undefined in {field}", r.0, r.1));
        Ok(GeneratorImages {
            comult: self
                .comult
                .iter()
                .map(|(g, ts)| Ok((g.clone(), ts.iter().map(|(c, l, r)| Ok((s(c)?, l.clone(), r.clone()))).collect::<Result<_, String>>()?)))
                .collect::<Result<_, String>>()?,
            counit: self.counit.iter().map(|(g, c)| Ok((g.clone(), s(c)?))).collect::<Result<_, String>>()?,
            antipode: self
                .antipode
                .iter()
                .map(|(g, ts)| Ok((g.clone(), ts.iter().map(|(c, p)| Ok((s(c)?, p.clone()))).collect::<Result<_, String>>()?)))
                .collect::<Result<_, String>>()?,
        })
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AlgFile {
    pub presentation: AlgebraPresentation,
    pub hopf: Option<HopfSections>,
    pub coaction: Option<CoactionKind>,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum AlgSection {
    Vertices,
    Arrows,
    Relations,
    Coproduct,
    Counit,
    Antipode,
    Coaction,
}

fn section_header<'a>(line: &Line<'a>) -> Option<&'a str> {
    let t = line.text.trim();
    t.strip_prefix('[').and_then(|s| s.strip_suffix(']'))
}

struct PathParser<'p> {
    p: &'p AlgebraPresentation,
}

impl PathParser<'_> {
    /// `e_<vertex>` or arrows joined by `*`, composed left to right.
    fn parse(&self, line: &Line, tok: &Token) -> Result<PathRef, ParseError> {
        if let Some(v) = tok.text.strip_prefix("e_") {
            return self
                .p
                .vertices
                .iter()
                .position(|x| x == v)
                .map(PathRef::Vertex)
                .ok_or_else(|| line.err(tok.col, format!("unknown vertex '{v}'")));
        }
        let mut arrows = Vec::new();
        let mut col = tok.col;
        for name in tok.text.split('*') {
            let Some(i) = self.p.arrows.iter().position(|a| a.name == name) else {
                return Err(line.err(col, format!("unknown arrow '{name}'")));
            };
            if let Some(&prev) = arrows.last() {
                let prev: &Arrow = &self.p.arrows[prev];
                if prev.tgt != self.p.arrows[i].src {
                    return Err(line.err(col, format!("'{}' does not compose with '{name}'", prev.name)));
                }
            }
            arrows.push(i);
            col += name.len() + 1;
        }
        Ok(PathRef::Arrows(arrows))
    }

    fn degree(&self, p: &PathRef) -> usize {
        match p {
            PathRef::Vertex(_) => 0,
            PathRef::Arrows(a) => a.iter().map(|&i| self.p.arrows[i].degree).sum(),
        }
    }
}

/// `name: src -> tgt (deg d)`; the degree clause is optional and defaults to 1.
fn parse_arrow(line: &Line, vertices: &[String]) -> Result<Arrow, ParseError> {
    let text = line.text;
    let (name, rest) = text.split_once(':').ok_or_else(|| line.err(1, "expected 'name: src -> tgt'"))?;
    let name = name.trim();
    if name.is_empty() || name.contains(|c: char| c.is_whitespace() || "*+-=()".contains(c)) || name.starts_with("e_") {
        return Err(line.err(1, format!("invalid arrow name '{name}'")));
    }
    let (ends, deg) = match rest.split_once('(') {
        Some((ends, d)) => (ends, Some(d)),
        None => (rest, None),
    };
    let (src, tgt) = ends.split_once("->").ok_or_else(|| line.err(line.col_of(":") + 1, "expected '->'"))?;
    let vertex = |s: &str, col: usize| {
        let s = s.trim();
        vertices.iter().position(|v| v == s).ok_or_else(|| line.err(col, format!("unknown vertex '{s}'")))
    };
    let src = vertex(src, line.col_of(":") + 1)?;
    let tgt = vertex(tgt, line.col_of("->") + 2)?;
    let degree = match deg {
        None => 1,
        Some(d) => {
            let col = line.col_of("(");
            let d = d.trim().strip_suffix(')').ok_or_else(|| line.err(col, "expected ')'"))?;
            let d = d.trim().strip_prefix("deg").ok_or_else(|| line.err(col + 1, "expected 'deg'"))?;
            d.trim()
                .parse::<usize>()
                .ok()
                .filter(|&d| d > 0)
                .ok_or_else(|| line.err(col + 4, format!("invalid degree '{}'", d.trim())))?
        }
    };
    Ok(Arrow {
        name: name.to_string(),
        src,
        tgt,
        degree,
    })
}

/// `lhs = rhs` with `lhs` a single factor.
fn split_definition<'a>(line: &Line<'a>, toks: &'a [Token<'a>]) -> Result<(Token<'a>, &'a [Token<'a>]), ParseError> {
    match toks {
        [lhs, eq, rest @ ..] if eq.text == "=" => Ok((*lhs, rest)),
        [first, ..] => Err(line.err(first.col, "expected 'generator = value'")),
        [] => Err(line.err(1, "empty definition")),
    }
}

pub fn parse_alg(text: &str) -> Result<AlgFile, ParseError> {
    let mut file = AlgFile::default();
    let mut section = None;
    let mut hopf = HopfSections::default();
    let mut seen_hopf = false;
    for line in lines(text) {
        if let Some(name) = section_header(&line) {
            section = Some(match name.trim() {
                "vertices" => AlgSection::Vertices,
                "arrows" => AlgSection::Arrows,
                "relations" => AlgSection::Relations,
                "coproduct" => AlgSection::Coproduct,
                "counit" => AlgSection::Counit,
                "antipode" => AlgSection::Antipode,
                "coaction" => AlgSection::Coaction,
                other => return Err(line.err(line.col_of("[") + 1, format!("unknown section '{other}'"))),
            });
            seen_hopf |= matches!(section, Some(AlgSection::Coproduct | AlgSection::Counit | AlgSection::Antipode));
            continue;
        }
        let p = &file.presentation;
        let paths = PathParser { p };
        let toks = line.tokens();
        match section {
            None => return Err(line.err(1, "content before the first section")),
            Some(AlgSection::Vertices) => {
                for t in line.text.split(|c: char| c.is_whitespace() || c == ',').filter(|s| !s.is_empty()) {
                    if file.presentation.vertices.iter().any(|v| v == t) {
                        return Err(line.err(line.col_of(t), format!("duplicate vertex '{t}'")));
                    }
                    file.presentation.vertices.push(t.to_string());
                }
            }
            Some(AlgSection::Arrows) => {
                let a = parse_arrow(&line, &p.vertices)?;
                if p.arrows.iter().any(|b| b.name == a.name) {
                    return Err(line.err(1, format!("duplicate arrow '{}'", a.name)));
                }
                file.presentation.arrows.push(a);
            }
            Some(AlgSection::Relations) => {
                let mut terms = Vec::new();
                let mut degree = None;
                for t in parse_combination(&line, &toks)? {
                    let [f] = t.factors[..] else {
                        return Err(line.err(t.factors[1].col, "relations are not tensors"));
                    };
                    let path = paths.parse(&line, &f)?;
                    let d = paths.degree(&path);
                    if degree.is_some_and(|e| e != d) {
                        return Err(line.err(f.col, "relation is not homogeneous"));
                    }
                    degree = Some(d);
                    let (path, vertex) = match path {
                        PathRef::Vertex(v) => (Vec::new(), Some(v)),
                        PathRef::Arrows(a) => (a, None),
                    };
                    terms.push(RelationTerm {
                        num: t.coef.0,
                        den: t.coef.1,
                        path,
                        vertex,
                    });
                }
                file.presentation.relations.push(Relation { terms });
            }
            Some(AlgSection::Coproduct) => {
                let (lhs, rhs) = split_definition(&line, &toks)?;
                let g = paths.parse(&line, &lhs)?;
                let mut out = Vec::new();
                for t in parse_combination(&line, rhs)? {
                    let [l, r] = t.factors[..] else {
                        return Err(line.err(t.factors[0].col, "expected 'left (x) right'"));
                    };
                    out.push((t.coef, paths.parse(&line, &l)?, paths.parse(&line, &r)?));
                }
                hopf.comult.push((g, out));
            }
            Some(AlgSection::Counit) => {
                let (lhs, rhs) = split_definition(&line, &toks)?;
                let g = paths.parse(&line, &lhs)?;
                let c = match rhs {
                    [t] => parse_rat(t).ok_or_else(|| line.err(t.col, format!("invalid scalar '{}'", t.text)))?,
                    [s, t] if s.text == "-" => {
                        let (n, d) = parse_rat(t).ok_or_else(|| line.err(t.col, format!("invalid scalar '{}'", t.text)))?;
                        (-n, d)
                    }
                    _ => return Err(line.err(lhs.col, "expected 'generator = scalar'")),
                };
                hopf.counit.push((g, c));
            }
            Some(AlgSection::Antipode) => {
                let (lhs, rhs) = split_definition(&line, &toks)?;
                let g = paths.parse(&line, &lhs)?;
                let mut out = Vec::new();
                for t in parse_combination(&line, rhs)? {
                    let [f] = t.factors[..] else {
                        return Err(line.err(t.factors[1].col, "antipode values are not tensors"));
                    };
                    out.push((t.coef, paths.parse(&line, &f)?));
                }
                hopf.antipode.push((g, out));
            }
            Some(AlgSection::Coaction) => match line.text.trim() {
                "degree-zero" => file.coaction = Some(CoactionKind::DegreeZero),
                other => return Err(line.err(line.col_of(other), format!("unknown coaction '{other}'"))),
            },
        }
    }
    if file.presentation.vertices.is_empty() {
        return Err(ParseError {
            line: 1,
            col: 1,
            msg: "no vertices".into(),
        });
    }
    if seen_hopf {
        file.hopf = Some(hopf);
    }
    Ok(file)
}

struct Fmt<'a>(&'a AlgebraPresentation);

impl Fmt<'_> {
    fn path(&self, p: &PathRef) -> String {
        match p {
            PathRef::Vertex(v) => format!("e_{}", self.0.vertices[*v]),
            PathRef::Arrows(a) => a.iter().map(|&i| self.0.arrows[i].name.as_str()).collect::<Vec<_>>().join("*"),
        }
    }
}

fn coef_prefix(out: &mut String, first: bool, n: i64, d: i64) {
    let neg = (n < 0) != (d < 0);
    let (n, d) = (n.unsigned_abs(), d.unsigned_abs());
    match (first, neg) {
        (true, true) => out.push_str("-"),
        (true, false) => {}
        (false, true) => out.push_str(" - "),
        (false, false) => out.push_str(" + "),
    }
    if d != 1 {
        let _ = write!(out, "{n}/{d} ");
    } else if n != 1 {
        let _ = write!(out, "{n} ");
    }
}

fn scalar_rat(s: &Scalar) -> Rat {
    let text = s.to_string();
    match text.split_once('/') {
        Some((n, d)) => (n.parse().expect("numerator"), d.parse().expect("denominator")),
        None => (text.parse().expect("integer"), 1),
    }
}

/// Canonical text form; `parse_alg(&write_alg(..))` reproduces the input.
pub fn write_alg(p: &AlgebraPresentation, hopf: Option<&HopfSections>, coaction: Option<CoactionKind>) -> String {
    let f = Fmt(p);
    let mut out = String::from("[vertices]\n");
    out.push_str(&p.vertices.join(" "));
    out.push_str("\n\n[arrows]\n");
    for a in &p.arrows {
        let _ = writeln!(out, "{}: {} -> {} (deg {})", a.name, p.vertices[a.src], p.vertices[a.tgt], a.degree);
    }
    out.push_str("\n[relations]\n");
    for r in &p.relations {
        for (i, t) in r.terms.iter().enumerate() {
            coef_prefix(&mut out, i == 0, t.num, t.den);
            let path = match t.vertex {
                Some(v) => PathRef::Vertex(v),
                None => PathRef::Arrows(t.path.clone()),
            };
            out.push_str(&f.path(&path));
        }
        out.push('\n');
    }
    if let Some(h) = hopf {
        out.push_str("\n[coproduct]\n");
        for (g, ts) in &h.comult {
            let _ = write!(out, "{} = ", f.path(g));
            for (i, (c, l, r)) in ts.iter().enumerate() {
                coef_prefix(&mut out, i == 0, c.0, c.1);
                let _ = write!(out, "{} (x) {}", f.path(l), f.path(r));
            }
            out.push('\n');
        }
        out.push_str("\n[counit]\n");
        for (g, c) in &h.counit {
            let c = if c.1 == 1 { c.0.to_string() } else { format!("{}/{}", c.0, c.1) };
            let _ = writeln!(out, "{} = {c}", f.path(g));
        }
        out.push_str("\n[antipode]\n");
        for (g, ts) in &h.antipode {
            let _ = write!(out, "{} = ", f.path(g));
            for (i, (c, q)) in ts.iter().enumerate() {
                coef_prefix(&mut out, i == 0, c.0, c.1);
                out.push_str(&f.path(q));
            }
            out.push('\n');
        }
    }
    if let Some(CoactionKind::DegreeZero) = coaction {
        out.push_str("\n[coaction]\ndegree-zero\n");
    }
    out
}

/// Rational form of generator images over `Q`, for writing.
pub fn sections_from_images(images: &GeneratorImages) -> HopfSections {
    HopfSections {
        comult: images
            .comult
            .iter()
            .map(|(g, ts)| (g.clone(), ts.iter().map(|(c, l, r)| (scalar_rat(c), l.clone(), r.clone())).collect()))
            .collect(),
        counit: images.counit.iter().map(|(g, c)| (g.clone(), scalar_rat(c))).collect(),
        antipode: images
            .antipode
            .iter()
            .map(|(g, ts)| (g.clone(), ts.iter().map(|(c, p)| (scalar_rat(c), p.clone())).collect()))
            .collect(),
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum HopfSection {
    Basis,
    Unit,
    Mult,
    Comult,
    Counit,
    Antipode,
}

fn basis_index(line: &Line, names: &[String], tok: &Token) -> Result<usize, ParseError> {
    names
        .iter()
        .position(|n| n == tok.text)
        .ok_or_else(|| line.err(tok.col, format!("unknown basis element '{}'", tok.text)))
}

fn scalar_row(line: &Line, toks: &[Token], field: Field, len: usize) -> Result<Vec<Scalar>, ParseError> {
    let mut out = Vec::new();
    let mut i = 0;
    while i < toks.len() {
        let neg = toks[i].text == "-";
        if neg {
            i += 1;
        }
        let t = toks.get(i).ok_or_else(|| line.err(line.text.len() + 1, "missing scalar"))?;
        let (n, d) = parse_rat(t).ok_or_else(|| line.err(t.col, format!("invalid scalar '{}'", t.text)))?;
        let s = rat_to_scalar(field, (if neg { -n } else { n }, d))
            .ok_or_else(|| line.err(t.col, format!("'{}' undefined in {field}", t.text)))?;
        out.push(s);
        i += 1;
    }
    if out.len() != len {
        return Err(line.err(1, format!("expected {len} entries, found {}", out.len())));
    }
    Ok(out)
}

fn combination_vector(
    line: &Line,
    toks: &[Token],
    names: &[String],
    field: Field,
    tensor: bool,
) -> Result<Vec<Scalar>, ParseError> {
    let n = names.len();
    let mut out = field.zeros(if tensor { n * n } else { n });
    for t in parse_combination(line, toks)? {
        let c = rat_to_scalar(field, t.coef).ok_or_else(|| line.err(t.factors[0].col, "coefficient undefined in this field"))?;
        let idx = match (tensor, &t.factors[..]) {
            (false, [a]) => basis_index(line, names, a)?,
            (true, [a, b]) => basis_index(line, names, a)? * n + basis_index(line, names, b)?,
            _ => {
                let what = if tensor { "'left (x) right'" } else { "a basis element" };
                return Err(line.err(t.factors[0].col, format!("expected {what}")));
            }
        };
        out[idx] += &c;
    }
    Ok(out)
}

/// Parses a `.hopf` file. Products and coproducts not listed are zero.
pub fn parse_hopf(text: &str, field: Field) -> Result<HopfAlgebra, ParseError> {
    let mut names: Vec<String> = Vec::new();
    let mut section = None;
    let mut unit = None;
    let mut mult = None::<Matrix>;
    let mut comult = None::<Matrix>;
    let mut counit = None;
    let mut antipode_rows: Vec<Vec<Scalar>> = Vec::new();
    let mut last_line = 1;
    for line in lines(text) {
        last_line = line.no;
        if let Some(name) = section_header(&line) {
            section = Some(match name.trim() {
                "basis" => HopfSection::Basis,
                "unit" => HopfSection::Unit,
                "mult" => HopfSection::Mult,
                "comult" => HopfSection::Comult,
                "counit" => HopfSection::Counit,
                "antipode" => HopfSection::Antipode,
                other => return Err(line.err(line.col_of("[") + 1, format!("unknown section '{other}'"))),
            });
            continue;
        }
        let n = names.len();
        if section != Some(HopfSection::Basis) && section.is_some() && n == 0 {
            return Err(line.err(1, "[basis] must come first"));
        }
        let toks = line.tokens();
        match section {
            None => return Err(line.err(1, "content before the first section")),
            Some(HopfSection::Basis) => {
                for t in &toks {
                    if matches!(t.text, "+" | "-" | "=" | "(x)") || names.iter().any(|x| x == t.text) {
                        return Err(line.err(t.col, format!("invalid or duplicate basis name '{}'", t.text)));
                    }
                    names.push(t.text.to_string());
                }
            }
            Some(HopfSection::Unit) => unit = Some(combination_vector(&line, &toks, &names, field, false)?),
            Some(HopfSection::Mult) => {
                let m = mult.get_or_insert_with(|| Matrix::zeros(field, n, n * n));
                let [a, b, eq, rest @ ..] = &toks[..] else {
                    return Err(line.err(1, "expected 'a b = combination'"));
                };
                if eq.text != "=" {
                    return Err(line.err(eq.col, "expected '='"));
                }
                let col = basis_index(&line, &names, a)? * n + basis_index(&line, &names, b)?;
                for (r, v) in combination_vector(&line, rest, &names, field, false)?.into_iter().enumerate() {
                    m.set(r, col, v);
                }
            }
            Some(HopfSection::Comult) => {
                let m = comult.get_or_insert_with(|| Matrix::zeros(field, n * n, n));
                let (lhs, rest) = split_definition(&line, &toks)?;
                let col = basis_index(&line, &names, &lhs)?;
                for (r, v) in combination_vector(&line, rest, &names, field, true)?.into_iter().enumerate() {
                    m.set(r, col, v);
                }
            }
            Some(HopfSection::Counit) => counit = Some(scalar_row(&line, &toks, field, n)?),
            Some(HopfSection::Antipode) => antipode_rows.push(scalar_row(&line, &toks, field, n)?),
        }
    }
    let missing = |what: &str| ParseError {
        line: last_line,
        col: 1,
        msg: format!("missing section [{what}]"),
    };
    let n = names.len();
    if antipode_rows.len() != n {
        return Err(missing("antipode"));
    }
    let antipode = Matrix::from_rows(field, n, &antipode_rows).expect("row lengths checked");
    HopfAlgebra::new(
        names,
        mult.ok_or_else(|| missing("mult"))?,
        unit.ok_or_else(|| missing("unit"))?,
        comult.ok_or_else(|| missing("comult"))?,
        counit.ok_or_else(|| missing("counit"))?,
        antipode,
    )
    .map_err(|e| ParseError {
        line: last_line,
        col: 1,
        msg: e.to_string(),
    })
}

struct Combination<'a> {
    names: &'a [String],
    v: &'a [Scalar],
    tensor: bool,
}

impl fmt::Display for Combination<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.names.len();
        let mut out = String::new();
        for (i, c) in self.v.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            let (num, den) = scalar_rat(c);
            let first = out.is_empty();
            coef_prefix(&mut out, first, num, den);
            if self.tensor {
                let _ = write!(out, "{} (x) {}", self.names[i / n], self.names[i % n]);
            } else {
                out.push_str(&self.names[i]);
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        f.write_str(&out)
    }
}

/// Canonical text form of a Hopf algebra over `Q` or `F_p`.
pub fn write_hopf(h: &HopfAlgebra) -> String {
    let names = h.names();
    let n = names.len();
    let comb = |v: &[Scalar], tensor| Combination { names, v, tensor }.to_string();
    let row = |v: &[Scalar]| v.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(" ");
    let mut out = format!("[basis]\n{}\n\n[unit]\n{}\n\n[mult]\n", names.join(" "), comb(h.unit(), false));
    for a in 0..n {
        for b in 0..n {
            let v = h.mult().col(a * n + b);
            if v.iter().any(|c| !c.is_zero()) {
                let _ = writeln!(out, "{} {} = {}", names[a], names[b], comb(&v, false));
            }
        }
    }
    out.push_str("\n[comult]\n");
    for a in 0..n {
        let _ = writeln!(out, "{} = {}", names[a], comb(&h.comult().col(a), true));
    }
    let _ = write!(out, "\n[counit]\n{}\n\n[antipode]\n", row(h.counit()));
    for r in 0..n {
        let _ = writeln!(out, "{}", row(h.antipode().row(r)));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    const Q: Field = Field::Rationals;

    #[test]
    fn quiver_roundtrip() {
        let p = fixtures::quiver_presentation();
        let h = sections_from_images(&fixtures::quiver_hopf_images(Q));
        let text = write_alg(&p, Some(&h), Some(CoactionKind::DegreeZero));
        let back = parse_alg(&text).unwrap();
        assert_eq!(back.presentation, p);
        assert_eq!(back.hopf.as_ref(), Some(&h));
        assert_eq!(back.coaction, Some(CoactionKind::DegreeZero));
        assert_eq!(back.hopf.unwrap().images(Q).unwrap(), fixtures::quiver_hopf_images(Q));
    }

    #[test]
    fn relation_with_fraction_and_vertex() {
        let text = "[vertices]\nv\n[arrows]\nx: v -> v\ny: v -> v (deg 1)\n[relations]\nx*y - 1/2 y*x   # comment\n";
        let f = parse_alg(text).unwrap();
        let r = &f.presentation.relations[0].terms;
        assert_eq!((r[1].num, r[1].den), (-1, 2));
        assert_eq!(r[1].path, vec![1, 0]);
    }

    #[test]
    fn errors_carry_locations() {
        let bad = "[vertices]\n0 1\n[arrows]\nx0: 0 -> 1\nx1: 1 -> 0\n[relations]\nx0*x0\n";
        let e = parse_alg(bad).unwrap_err();
        assert_eq!((e.line, e.col), (7, 4));
        let e = parse_alg("[vertices]\n0\n[arrows]\nx: 0 -> 2\n").unwrap_err();
        assert_eq!(e.line, 4);
        assert!(e.msg.contains("unknown vertex"));
        let e = parse_alg("[vertices]\n0\n[arrows]\nx: 0 -> 0\n[relations]\nx*x +\n").unwrap_err();
        assert_eq!(e.line, 6);
        let e = parse_alg("[vertices]\n0\n[arrows]\nx: 0 -> 0\n[relations]\nx*x - x\n").unwrap_err();
        assert!(e.msg.contains("homogeneous"));
    }

    #[test]
    fn hopf_roundtrip() {
        for h in [HopfAlgebra::cyclic_group(2, Q), HopfAlgebra::cyclic_group(3, Q).dual()] {
            let text = write_hopf(&h);
            let back = parse_hopf(&text, Q).unwrap();
            assert_eq!(write_hopf(&back), text);
            assert!(back.verify_axioms().passed());
        }
    }

    #[test]
    fn hopf_errors() {
        let e = parse_hopf("[basis]\n1 g\n[unit]\n1\n[mult]\n1 h = g\n", Q).unwrap_err();
        assert_eq!((e.line, e.col), (6, 3));
        let e = parse_hopf("[basis]\n1 g\n[counit]\n1\n", Q).unwrap_err();
        assert!(e.msg.contains("expected 2 entries"));
    }
}

#[cfg(test)]
mod golden {
    use super::*;
    use crate::fixtures;

    const Q: Field = Field::Rationals;

    fn read(name: &str) -> String {
        let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../../fixtures/");
        std::fs::read_to_string(format!("{path}{name}")).unwrap()
    }

    #[test]
    fn quiver_file_matches_builtin() {
        let f = parse_alg(&read("paper_quiver.alg")).unwrap();
        assert_eq!(f.presentation, fixtures::quiver_presentation());
        assert_eq!(f.hopf.unwrap().images(Q).unwrap(), fixtures::quiver_hopf_images(Q));
        assert_eq!(f.coaction, Some(CoactionKind::DegreeZero));
    }

    #[test]
    fn quiver_file_builds_fixture() {
        let f = parse_alg(&read("paper_quiver.alg")).unwrap();
        let fx = fixtures::from_alg("quiver", &f, Q, 3).unwrap();
        assert_eq!(fx.galois().b.algebra.dims(), &[1, 2, 3, 4]);
    }

    #[test]
    fn kz2_file_matches_builtin() {
        let h = parse_hopf(&read("kz2.hopf"), Q).unwrap();
        assert_eq!(write_hopf(&h), write_hopf(&HopfAlgebra::cyclic_group(2, Q)));
        let h5 = parse_hopf(&read("kz2.hopf"), Field::prime(5).unwrap()).unwrap();
        assert!(h5.verify_axioms().passed());
    }
}
