//! Model files.
//!
//! ```text
//! model "free superparticle"
//! even q1
//! odd th1 th2
//! lagrangian 1/2*v1^2 + 1/2*z1*z2
//! ```
//!
//! Velocities `v<i>` and `z<a>` are declared implicitly by the `even` and
//! `odd` lists. Blank lines and `#` comments are ignored; `flag <word>`
//! lines are kept verbatim.

use std::fmt;

use supermech_core::charts::{chart_with_names, BaseNames, ChartKind};
use supermech_core::{Chart, Parity, SuperFunction};

use crate::error::ParseError;
use crate::expr;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModelSpec {
    pub name: String,
    pub names: BaseNames,
    pub lagrangian: SuperFunction,
    pub flags: Vec<String>,
}

impl ModelSpec {
    pub fn dims(&self) -> (usize, usize) {
        self.names.dims()
    }

    pub fn chart(&self) -> &Chart {
        self.lagrangian.chart()
    }

    pub fn parity(&self) -> Parity {
        self.lagrangian.parity().unwrap_or(Parity::Even)
    }
}

impl fmt::Display for ModelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "model \"{}\"", self.name)?;
        for (kw, names) in [("even", &self.names.even), ("odd", &self.names.odd)] {
            f.write_str(kw)?;
            for n in names {
                write!(f, " {n}")?;
            }
            writeln!(f)?;
        }
        for flag in &self.flags {
            writeln!(f, "flag {flag}")?;
        }
        writeln!(f, "lagrangian {}", self.lagrangian)
    }
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

/// Splits `line` into its keyword and the rest, with the rest's column.
fn keyword(line: &str) -> (&str, &str, usize) {
    let lead = line.len() - line.trim_start().len();
    let body = &line[lead..];
    let end = body.find(char::is_whitespace).unwrap_or(body.len());
    let rest = &body[end..];
    let rest_lead = rest.len() - rest.trim_start().len();
    (&body[..end], rest.trim(), lead + end + rest_lead + 1)
}

fn parse_name(rest: &str, line: usize, col: usize) -> Result<String, ParseError> {
    let inner = rest
        .strip_prefix('"')
        .and_then(|r| r.strip_suffix('"'))
        .ok_or_else(|| ParseError::new(line, col, "model name must be a double-quoted string"))?;
    if inner.contains('"') {
        return Err(ParseError::new(line, col, "model name must not contain quotes"));
    }
    Ok(inner.to_string())
}

fn parse_names(rest: &str, line: usize, col: usize) -> Result<Vec<String>, ParseError> {
    let mut out: Vec<String> = Vec::new();
    for w in rest.split_whitespace() {
        let ok = w.chars().next().is_some_and(|c| c.is_ascii_alphabetic())
            && w.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
        if !ok {
            return Err(ParseError::new(line, col, format!("`{w}` is not an identifier")));
        }
        if matches!(w, "sin" | "cos" | "exp") {
            return Err(ParseError::new(line, col, format!("`{w}` is reserved")));
        }
        if out.iter().any(|o| o == w) {
            return Err(ParseError::new(line, col, format!("`{w}` declared twice")));
        }
        out.push(w.to_string());
    }
    Ok(out)
}

pub fn parse_model(src: &str) -> Result<ModelSpec, ParseError> {
    let mut name = None;
    let mut even: Option<Vec<String>> = None;
    let mut odd: Option<Vec<String>> = None;
    let mut flags = Vec::new();
    let mut lagrangian: Option<(String, usize, usize)> = None;
    let mut last_line = 1;
    for (k, raw) in src.lines().enumerate() {
        let ln = k + 1;
        last_line = ln;
        let line = strip_comment(raw);
        if line.trim().is_empty() {
            continue;
        }
        let (kw, rest, col) = keyword(line);
        let kw_col = line.len() - line.trim_start().len() + 1;
        let dup = |what: &str| ParseError::new(ln, kw_col, format!("duplicate `{what}` line"));
        match kw {
            "model" => {
                if name.is_some() {
                    return Err(dup("model"));
                }
                name = Some(parse_name(rest, ln, col)?);
            }
            "even" | "odd" if name.is_none() => {
                return Err(ParseError::new(ln, kw_col, "expected `model \"<name>\"` first"));
            }
            "even" => {
                if even.is_some() {
                    return Err(dup("even"));
                }
                even = Some(parse_names(rest, ln, col)?);
            }
            "odd" => {
                if odd.is_some() {
                    return Err(dup("odd"));
                }
                odd = Some(parse_names(rest, ln, col)?);
            }
            "flag" => {
                let words = parse_names(rest, ln, col)?;
                if words.len() != 1 {
                    return Err(ParseError::new(ln, col, "`flag` takes one word"));
                }
                flags.extend(words);
            }
            "lagrangian" => {
                if lagrangian.is_some() {
                    return Err(dup("lagrangian"));
                }
                if rest.is_empty() {
                    return Err(ParseError::new(ln, col, "missing Lagrangian expression"));
                }
                lagrangian = Some((rest.to_string(), ln, col));
            }
            other => {
                return Err(ParseError::new(ln, kw_col, format!("unknown keyword `{other}`")));
            }
        }
    }
    let name = name.ok_or_else(|| ParseError::new(1, 1, "expected `model \"<name>\"`"))?;
    let (src_l, ln, col) =
        lagrangian.ok_or_else(|| ParseError::new(last_line, 1, "missing `lagrangian` line"))?;
    let names = BaseNames::new(&even.unwrap_or_default(), &odd.unwrap_or_default());
    let tm = chart_with_names(ChartKind::Tangent, &names)
        .map_err(|e| ParseError::new(1, 1, format!("coordinate names clash with velocities: {e}")))?;
    let stm = chart_with_names(ChartKind::TangentSuper, &names)
        .map_err(|e| ParseError::new(1, 1, format!("coordinate names clash with velocities: {e}")))?;
    let parsed = expr::parse_at(&src_l, ln, col)?;
    for (id, l, c) in &parsed.idents {
        if tm.index_of(id).is_none() {
            let msg = if stm.index_of(id).is_some() {
                format!("Lagrangian must live on TM: `{id}` is a coordinate of STM only")
            } else {
                format!("unknown identifier `{id}`")
            };
            return Err(ParseError::new(*l, *c, msg));
        }
    }
    let l = SuperFunction::from_tree(&tm, &parsed.tree).map_err(|e| ParseError::new(ln, col, e.to_string()))?;
    if l.parity().is_none() {
        return Err(ParseError::new(ln, col, "Lagrangian mixes even and odd terms"));
    }
    Ok(ModelSpec {
        name,
        names,
        lagrangian: l,
        flags,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use supermech_core::charts::make_chart;

    const FREE: &str = "model \"free superparticle\"\neven q1\nodd th1 th2\nlagrangian 1/2*v1^2 + 1/2*z1*z2\n";

    #[test]
    fn free_superparticle_file() {
        let m = parse_model(FREE).unwrap();
        assert_eq!(m.dims(), (1, 2));
        let tm = make_chart(ChartKind::Tangent, 1, 2);
        let v = |n: &str| SuperFunction::var(&tm, n).unwrap();
        let half = SuperFunction::from_rational(&tm, supermech_core::scalar::rational(1, 2));
        let want = &(&half * &(&v("v1") * &v("v1"))) + &(&half * &(&v("z1") * &v("z2")));
        assert_eq!(m.lagrangian, want);
        assert_eq!(m.to_string(), FREE);
    }

    #[test]
    fn round_trip_with_custom_names_and_flags() {
        let src = "# comment\nmodel \"x\"\neven x y\nodd psi\nflag demo\nlagrangian 1/2*(v1^2 + v2^2) + psi*z1*x  # tail\n";
        let m = parse_model(src).unwrap();
        assert_eq!(parse_model(&m.to_string()).unwrap(), m);
        assert_eq!(m.flags, ["demo"]);
    }

    #[test]
    fn scope_and_parity_errors() {
        let e = parse_model("model \"a\"\neven q1\nodd th1\nlagrangian 1/2*v1^2 + pv1*th1\n").unwrap_err();
        assert!(e.message.starts_with("Lagrangian must live on TM"), "{e}");
        assert_eq!((e.line, e.column), (4, 23));
        let e = parse_model("model \"a\"\neven q1\nodd th1\nlagrangian w\n").unwrap_err();
        assert!(e.message.contains("unknown identifier `w`"));
        let e = parse_model("model \"a\"\neven q1\nodd th1\nlagrangian v1 + z1\n").unwrap_err();
        assert!(e.message.contains("mixes even and odd"));
    }

    #[test]
    fn structural_errors() {
        let e = parse_model("").unwrap_err();
        assert_eq!((e.line, e.column), (1, 1));
        assert!(parse_model("model \"a\"\neven q1\n").unwrap_err().message.contains("missing `lagrangian`"));
        assert!(parse_model("model a\n").is_err());
        assert!(parse_model("model \"a\"\neven q1 q1\nlagrangian 0\n").is_err());
        assert!(parse_model("model \"a\"\neven v1\nlagrangian 0\n").is_err());
        assert!(parse_model("model \"a\"\nmodel \"b\"\n").unwrap_err().message.contains("duplicate"));
        assert!(parse_model("model \"a\"\nspeed 3\n").unwrap_err().message.contains("unknown keyword"));
        assert!(parse_model("model \"a\"\neven q1\nlagrangian 1/th1\n").is_err());
    }
}
