//! Atlas files.
//!
//! ```text
//! atlas <name>
//! chart <id> even <m> odd <n>
//! flag batchelor
//! transition <id1> <id2>
//!   <coord> := <superfunction-expression>
//! end
//! ```
//!
//! `transition a b` gives chart a's coordinates as functions of chart b's.
//! Every chart uses the names q1.., th1..; coordinates left out of a
//! transition map to themselves.

use std::collections::BTreeMap;

use supermech_core::charts::Atlas;
use supermech_core::SuperFunction;

use crate::error::ParseError;
use crate::expr;

struct Pending {
    to: String,
    from: String,
    line: usize,
    named: BTreeMap<String, SuperFunction>,
}

fn words(line: &str) -> Vec<(&str, usize)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in line.char_indices() {
        match (c.is_whitespace(), start) {
            (true, Some(s)) => {
                out.push((&line[s..i], s + 1));
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((&line[s..], s + 1));
    }
    out
}

fn count(w: Option<&(&str, usize)>, ln: usize, what: &str) -> Result<usize, ParseError> {
    match w {
        Some((s, c)) => s
            .parse()
            .map_err(|_| ParseError::new(ln, *c, format!("expected the {what} dimension, found `{s}`"))),
        None => Err(ParseError::new(ln, 1, format!("missing {what} dimension"))),
    }
}

pub fn parse_atlas(src: &str) -> Result<Atlas, ParseError> {
    let mut name: Option<String> = None;
    let mut batchelor = false;
    let mut atlas: Option<Atlas> = None;
    let mut pending: Option<Pending> = None;
    let mut last_line = 1;
    for (k, raw) in src.lines().enumerate() {
        let ln = k + 1;
        last_line = ln;
        let line = match raw.find('#') {
            Some(i) => &raw[..i],
            None => raw,
        };
        let ws = words(line);
        let Some(&(kw, kw_col)) = ws.first() else {
            continue;
        };
        if let Some(p) = pending.as_mut() {
            if kw == "end" {
                let p = pending.take().expect("checked above");
                let a = atlas.as_mut().expect("transition implies atlas");
                a.add_transition(&p.to, &p.from, &p.named)
                    .map_err(|e| ParseError::new(p.line, 1, e.to_string()))?;
                continue;
            }
            let Some(at) = line.find(":=") else {
                return Err(ParseError::new(ln, kw_col, "expected `<coord> := <expression>` or `end`"));
            };
            let coord = line[..at].trim();
            let cs = atlas.as_ref().expect("transition implies atlas").base_chart();
            if cs.index_of(coord).is_none() {
                return Err(ParseError::new(ln, kw_col, format!("unknown coordinate `{coord}`")));
            }
            if p.named.contains_key(coord) {
                return Err(ParseError::new(ln, kw_col, format!("`{coord}` assigned twice")));
            }
            let rhs = &line[at + 2..];
            let col = at + 3 + (rhs.len() - rhs.trim_start().len());
            let parsed = expr::parse_at(rhs.trim(), ln, col)?;
            for (id, l, c) in &parsed.idents {
                if cs.index_of(id).is_none() {
                    return Err(ParseError::new(*l, *c, format!("unknown identifier `{id}`")));
                }
            }
            let f = SuperFunction::from_tree(&cs, &parsed.tree).map_err(|e| ParseError::new(ln, col, e.to_string()))?;
            p.named.insert(coord.to_string(), f);
            continue;
        }
        match kw {
            "atlas" => {
                if name.is_some() {
                    return Err(ParseError::new(ln, kw_col, "duplicate `atlas` line"));
                }
                let rest = line.trim()[5..].trim();
                if rest.is_empty() {
                    return Err(ParseError::new(ln, kw_col, "missing atlas name"));
                }
                name = Some(rest.to_string());
            }
            _ if name.is_none() => {
                return Err(ParseError::new(ln, kw_col, "expected `atlas <name>` first"));
            }
            "chart" => {
                if ws.len() != 6 || ws[2].0 != "even" || ws[4].0 != "odd" {
                    return Err(ParseError::new(ln, kw_col, "expected `chart <id> even <m> odd <n>`"));
                }
                let (m, n) = (count(ws.get(3), ln, "even")?, count(ws.get(5), ln, "odd")?);
                let a = atlas.get_or_insert_with(|| Atlas::new(name.as_deref().unwrap_or_default(), m, n));
                a.add_chart(ws[1].0, m, n).map_err(|e| ParseError::new(ln, ws[1].1, e.to_string()))?;
            }
            "flag" => match ws.get(1).map(|w| w.0) {
                Some("batchelor") if ws.len() == 2 => batchelor = true,
                _ => return Err(ParseError::new(ln, kw_col, "the only atlas flag is `batchelor`")),
            },
            "transition" => {
                if ws.len() != 3 {
                    return Err(ParseError::new(ln, kw_col, "expected `transition <id1> <id2>`"));
                }
                let known = |id: &str| atlas.as_ref().is_some_and(|a| a.charts().iter().any(|x| x == id));
                for (id, c) in &ws[1..] {
                    if !known(id) {
                        return Err(ParseError::new(ln, *c, format!("unknown chart `{id}`")));
                    }
                }
                if ws[1].0 == ws[2].0 {
                    return Err(ParseError::new(ln, ws[2].1, "a transition needs two different charts"));
                }
                pending = Some(Pending {
                    to: ws[1].0.to_string(),
                    from: ws[2].0.to_string(),
                    line: ln,
                    named: BTreeMap::new(),
                });
            }
            other => return Err(ParseError::new(ln, kw_col, format!("unknown keyword `{other}`"))),
        }
    }
    if pending.is_some() {
        return Err(ParseError::new(last_line, 1, "transition block is missing `end`"));
    }
    if name.is_none() {
        return Err(ParseError::new(1, 1, "expected `atlas <name>`"));
    }
    let mut a = atlas.ok_or_else(|| ParseError::new(last_line, 1, "atlas declares no charts"))?;
    a.batchelor = batchelor;
    Ok(a)
}

#[cfg(test)]
mod tests {
    use super::*;

    const SHIFT: &str = "atlas soul-shift\nchart U even 1 odd 2\nchart V even 1 odd 2\ntransition U V\n  q1 := q1 + th1*th2\nend\n";

    #[test]
    fn soul_shift_atlas() {
        let a = parse_atlas(SHIFT).unwrap();
        assert_eq!(a.name, "soul-shift");
        assert_eq!(a.dims(), (1, 2));
        assert_eq!(a.charts(), ["U", "V"]);
        let t = a.transition("U", "V").unwrap();
        assert_eq!(t.assignment_of("q1").unwrap().to_string(), "q1 + th1*th2");
        assert!(t.assignment_of("th2").unwrap().to_string() == "th2");
        assert!(!a.batchelor);
    }

    #[test]
    fn errors() {
        assert!(parse_atlas("").is_err());
        assert!(parse_atlas("chart U even 1 odd 0\n").is_err());
        let e = parse_atlas("atlas a\nchart U even 1 odd 0\ntransition U W\nend\n").unwrap_err();
        assert_eq!((e.line, e.column), (3, 14));
        let e = parse_atlas("atlas a\nchart U even 1 odd 0\nchart V even 1 odd 0\ntransition U V\n q1 := q1 + x\nend\n")
            .unwrap_err();
        assert_eq!((e.line, e.column), (5, 13));
        assert!(parse_atlas("atlas a\nchart U even 1 odd 0\nchart V even 2 odd 0\n").is_err());
        assert!(parse_atlas("atlas a\nchart U even 1 odd 0\nchart V even 1 odd 0\ntransition U V\n q1 := q1\n").is_err());
        assert!(parse_atlas("atlas a\nchart U even 1 odd 1\nchart V even 1 odd 1\ntransition U V\n q1 := th1\nend\n").is_err());
        assert!(parse_atlas("atlas a\nflag other\n").is_err());
    }
}
