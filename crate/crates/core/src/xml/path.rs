use std::fmt;

use super::XmlError;

/// A location path in the supported subset: child and attribute axes,
/// `*`, `text()`, and `[n]` / `[@a='v']` predicates.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PathExpr {
    pub absolute: bool,
    pub steps: Vec<Step>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Step {
    pub test: NodeTest,
    pub predicates: Vec<Predicate>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum NodeTest {
    Element(String),
    AnyElement,
    Attribute(String),
    Text,
}

impl NodeTest {
    fn is_terminal(&self) -> bool {
        matches!(self, NodeTest::Attribute(_) | NodeTest::Text)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Predicate {
    /// 1-based.
    Position(usize),
    AttributeEquals { name: String, value: String },
}

pub fn compile_path(expr: &str) -> Result<PathExpr, XmlError> {
    PathParser::new(expr).parse()
}

impl std::str::FromStr for PathExpr {
    type Err = XmlError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        compile_path(s)
    }
}

struct PathParser {
    chars: Vec<char>,
    pos: usize,
}

fn is_name_start(c: char) -> bool {
    c.is_alphabetic() || c == '_'
}

fn is_name_char(c: char) -> bool {
    c.is_alphanumeric() || matches!(c, '_' | '-' | '.' | ':' | '\u{B7}')
}

impl PathParser {
    fn new(src: &str) -> Self {
        PathParser {
            chars: src.chars().collect(),
            pos: 0,
        }
    }

    fn err(&self, reason: impl Into<String>) -> XmlError {
        XmlError::PathSyntax {
            position: self.pos + 1,
            reason: reason.into(),
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn parse(mut self) -> Result<PathExpr, XmlError> {
        self.skip_ws();
        let absolute = self.eat('/');
        let mut steps = Vec::new();
        loop {
            if self.peek() == Some('/') {
                return Err(self.err("descendant axis '//' is not supported"));
            }
            if steps.last().is_some_and(|s: &Step| s.test.is_terminal()) {
                return Err(self.err("text() and @attribute must be the last step"));
            }
            steps.push(self.step()?);
            self.skip_ws();
            if self.eat('/') {
                continue;
            }
            match self.peek() {
                None => break,
                Some(c) => return Err(self.err(format!("unexpected {c:?}"))),
            }
        }
        Ok(PathExpr { absolute, steps })
    }

    fn name(&mut self) -> Result<String, XmlError> {
        match self.peek() {
            Some(c) if is_name_start(c) => {}
            Some(c) => return Err(self.err(format!("expected a name, found {c:?}"))),
            None => return Err(self.err("expected a name")),
        }
        let start = self.pos;
        while self.peek().is_some_and(is_name_char) {
            self.pos += 1;
        }
        Ok(self.chars[start..self.pos].iter().collect())
    }

    fn step(&mut self) -> Result<Step, XmlError> {
        let test = if self.eat('*') {
            NodeTest::AnyElement
        } else if self.eat('@') {
            NodeTest::Attribute(self.name()?)
        } else {
            let name = self.name()?;
            if self.peek() == Some('(') {
                if name == "text" {
                    self.pos += 1;
                    if !self.eat(')') {
                        return Err(self.err("expected ')'"));
                    }
                    NodeTest::Text
                } else {
                    return Err(self.err(format!("function {name}() is not supported")));
                }
            } else {
                NodeTest::Element(name)
            }
        };
        let mut predicates = Vec::new();
        while self.eat('[') {
            self.skip_ws();
            predicates.push(self.predicate()?);
            self.skip_ws();
            if !self.eat(']') {
                return Err(self.err("expected ']'"));
            }
        }
        Ok(Step { test, predicates })
    }

    fn predicate(&mut self) -> Result<Predicate, XmlError> {
        if self.peek().is_some_and(|c| c.is_ascii_digit()) {
            let start = self.pos;
            while self.peek().is_some_and(|c| c.is_ascii_digit()) {
                self.pos += 1;
            }
            let digits: String = self.chars[start..self.pos].iter().collect();
            let n: usize = digits.parse().map_err(|_| self.err("position out of range"))?;
            if n == 0 {
                return Err(self.err("positions are 1-based"));
            }
            return Ok(Predicate::Position(n));
        }
        if !self.eat('@') {
            return Err(self.err("expected a position or @attribute='value'"));
        }
        let name = self.name()?;
        self.skip_ws();
        if !self.eat('=') {
            return Err(self.err("expected '='"));
        }
        self.skip_ws();
        let quote = match self.peek() {
            Some(q @ ('\'' | '"')) => q,
            _ => return Err(self.err("expected a quoted literal")),
        };
        self.pos += 1;
        let start = self.pos;
        while self.peek().is_some_and(|c| c != quote) {
            self.pos += 1;
        }
        if self.peek().is_none() {
            return Err(self.err("unterminated literal"));
        }
        let value = self.chars[start..self.pos].iter().collect();
        self.pos += 1;
        Ok(Predicate::AttributeEquals { name, value })
    }
}

impl fmt::Display for PathExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.absolute {
            f.write_str("/")?;
        }
        for (i, step) in self.steps.iter().enumerate() {
            if i > 0 {
                f.write_str("/")?;
            }
            match &step.test {
                NodeTest::Element(n) => f.write_str(n)?,
                NodeTest::AnyElement => f.write_str("*")?,
                NodeTest::Attribute(n) => write!(f, "@{n}")?,
                NodeTest::Text => f.write_str("text()")?,
            }
            for p in &step.predicates {
                match p {
                    Predicate::Position(n) => write!(f, "[{n}]")?,
                    Predicate::AttributeEquals { name, value } if value.contains('\'') => {
                        write!(f, "[@{name}=\"{value}\"]")?
                    }
                    Predicate::AttributeEquals { name, value } => write!(f, "[@{name}='{value}']")?,
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn absolute_with_attr_predicate() {
        let p = compile_path("/document/fragment[@type='tenor']").unwrap();
        assert!(p.absolute);
        assert_eq!(p.steps.len(), 2);
        assert_eq!(p.steps[0].test, NodeTest::Element("document".into()));
        assert_eq!(
            p.steps[1].predicates,
            vec![Predicate::AttributeEquals {
                name: "type".into(),
                value: "tenor".into()
            }]
        );
    }

    #[test]
    fn relative_text_step() {
        let p = compile_path("keyword/text()").unwrap();
        assert!(!p.absolute);
        assert_eq!(p.steps[1].test, NodeTest::Text);
    }

    #[test]
    fn descendant_axis_rejected() {
        match compile_path("a//b") {
            Err(XmlError::PathSyntax { position, .. }) => assert_eq!(position, 3),
            other => panic!("{other:?}"),
        }
        assert!(compile_path("//b").is_err());
    }

    #[test]
    fn other_rejections() {
        for bad in ["", "/", "a/", "a/text()/b", "@x/y", "a[0]", "a[@x=1]", "count(a)", "a|b", "a[@x='1'", "a b", "."] {
            assert!(compile_path(bad).is_err(), "{bad:?}");
        }
    }

    #[test]
    fn accepts_subset_forms() {
        for ok in ["*", "@id", "a/*/c[2]", "text()", "x:a/@x:b", "k[2]/text()", "a[ @t = \"it's\" ][1]"] {
            assert!(compile_path(ok).is_ok(), "{ok:?}");
        }
    }

    #[test]
    fn display_round_trips() {
        for src in ["/document/fragment[@type='tenor']", "k[2]/text()", "a/*/@id", "a[@t=\"it's\"][3]"] {
            let p = compile_path(src).unwrap();
            assert_eq!(compile_path(&p.to_string()).unwrap(), p);
        }
    }
}
