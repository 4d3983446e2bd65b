//! Ordered key-value report trees with a text and a `kv` rendering.

use std::fmt::Write;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Node {
    Leaf(String),
    Branch(Vec<(String, Node)>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Kv,
}

impl std::str::FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "text" => Ok(Format::Text),
            "kv" => Ok(Format::Kv),
            _ => Err(format!("unknown format `{s}` (expected text or kv)")),
        }
    }
}

/// Builder for one branch.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Section(Vec<(String, Node)>);

impl Section {
    pub fn new() -> Self {
        Section(Vec::new())
    }

    pub fn leaf(&mut self, key: impl Into<String>, value: impl ToString) -> &mut Self {
        self.0.push((key.into(), Node::Leaf(value.to_string())));
        self
    }

    pub fn branch(&mut self, key: impl Into<String>, s: Section) -> &mut Self {
        self.0.push((key.into(), Node::Branch(s.0)));
        self
    }

    pub fn get(&self, key: &str) -> Option<&Node> {
        self.0.iter().find(|(k, _)| k == key).map(|(_, n)| n)
    }

    pub fn entries(&self) -> &[(String, Node)] {
        &self.0
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report {
    pub sections: Vec<(String, Section)>,
}

impl Report {
    pub fn push(&mut self, name: impl Into<String>, s: Section) {
        self.sections.push((name.into(), s));
    }

    pub fn section(&self, name: &str) -> Option<&Section> {
        self.sections.iter().find(|(n, _)| n == name).map(|(_, s)| s)
    }

    /// Leaf at a dotted path such as `regularity.verdict`.
    pub fn lookup(&self, path: &str) -> Option<&str> {
        let mut parts = path.split('.');
        let mut entries = self.section(parts.next()?)?.entries();
        let mut parts = parts.peekable();
        while let Some(p) = parts.next() {
            let node = entries.iter().find(|(k, _)| k == p).map(|(_, n)| n)?;
            match node {
                Node::Leaf(v) if parts.peek().is_none() => return Some(v),
                Node::Branch(b) => entries = b,
                Node::Leaf(_) => return None,
            }
        }
        None
    }

    pub fn render(&self, format: Format) -> String {
        let mut out = String::new();
        match format {
            Format::Text => {
                for (i, (name, s)) in self.sections.iter().enumerate() {
                    if i > 0 {
                        out.push('\n');
                    }
                    let _ = writeln!(out, "[{name}]");
                    text(&mut out, &s.0, 0);
                }
            }
            Format::Kv => {
                for (name, s) in &self.sections {
                    kv(&mut out, name, &s.0);
                }
            }
        }
        out
    }
}

fn text(out: &mut String, entries: &[(String, Node)], depth: usize) {
    let pad = "  ".repeat(depth);
    for (k, n) in entries {
        match n {
            Node::Leaf(v) => {
                let _ = writeln!(out, "{pad}{k}: {v}");
            }
            Node::Branch(b) => {
                let _ = writeln!(out, "{pad}{k}:");
                text(out, b, depth + 1);
            }
        }
    }
}

fn kv(out: &mut String, prefix: &str, entries: &[(String, Node)]) {
    for (k, n) in entries {
        let key = format!("{prefix}.{}", k.replace(' ', "_"));
        match n {
            Node::Leaf(v) => {
                let _ = writeln!(out, "{key} = {v}");
            }
            Node::Branch(b) => kv(out, &key, b),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Report {
        let mut r = Report::default();
        let mut a = Section::new();
        a.leaf("name", "demo");
        let mut inner = Section::new();
        inner.leaf("d/dt q1", "v1");
        a.branch("equations", inner);
        r.push("model", a);
        let mut b = Section::new();
        b.leaf("verdict", "regular");
        r.push("regularity", b);
        r
    }

    #[test]
    fn renderings() {
        let r = sample();
        assert_eq!(
            r.render(Format::Text),
            "[model]\nname: demo\nequations:\n  d/dt q1: v1\n\n[regularity]\nverdict: regular\n"
        );
        assert_eq!(
            r.render(Format::Kv),
            "model.name = demo\nmodel.equations.d/dt_q1 = v1\nregularity.verdict = regular\n"
        );
    }

    #[test]
    fn lookup_paths() {
        let r = sample();
        assert_eq!(r.lookup("regularity.verdict"), Some("regular"));
        assert_eq!(r.lookup("model.equations.d/dt q1"), Some("v1"));
        assert_eq!(r.lookup("model.equations"), None);
        assert_eq!(r.lookup("nope.x"), None);
        assert_eq!("kv".parse::<Format>(), Ok(Format::Kv));
        assert!("xml".parse::<Format>().is_err());
    }
}
