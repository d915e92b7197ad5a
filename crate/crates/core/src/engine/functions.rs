use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

pub const FN_NS: &str = "http://uplift.example/fn/";

/// A pure transformation over evaluated parameter strings.
pub type NativeFn = Arc<dyn Fn(&[&str]) -> String + Send + Sync>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Arity {
    Exact(usize),
    AtLeast(usize),
}

impl Arity {
    pub fn accepts(self, n: usize) -> bool {
        match self {
            Arity::Exact(k) => n == k,
            Arity::AtLeast(k) => n >= k,
        }
    }
}

impl fmt::Display for Arity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Arity::Exact(k) => write!(f, "{k}"),
            Arity::AtLeast(k) => write!(f, "at least {k}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FunctionError {
    #[error("unknown function <{0}>")]
    UnknownFunction(String),
    #[error("function <{function}> expects {expected} arguments, got {got}")]
    ArityMismatch { function: String, expected: Arity, got: usize },
}

#[derive(Clone)]
struct Entry {
    arity: Arity,
    f: NativeFn,
}

/// Functions callable from `fnml:functionValue` term maps, keyed by IRI.
/// `new()` includes the built-ins.
#[derive(Clone)]
pub struct FunctionRegistry {
    entries: HashMap<String, Entry>,
}

impl fmt::Debug for FunctionRegistry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut names: Vec<_> = self.entries.keys().collect();
        names.sort();
        f.debug_struct("FunctionRegistry").field("functions", &names).finish()
    }
}

impl Default for FunctionRegistry {
    fn default() -> Self {
        Self::new()
    }
}

fn is_xml_space(c: char) -> bool {
    matches!(c, ' ' | '\t' | '\n' | '\r')
}

pub fn normalize_space(s: &str) -> String {
    s.split(is_xml_space).filter(|w| !w.is_empty()).collect::<Vec<_>>().join(" ")
}

impl FunctionRegistry {
    pub fn new() -> Self {
        let mut r = FunctionRegistry {
            entries: HashMap::new(),
        };
        r.register(&format!("{FN_NS}trim"), Arity::Exact(1), |a| a[0].trim_matches(is_xml_space).to_string());
        r.register(&format!("{FN_NS}normalizeSpace"), Arity::Exact(1), |a| normalize_space(a[0]));
        r.register(&format!("{FN_NS}lowercase"), Arity::Exact(1), |a| a[0].to_lowercase());
        r.register(&format!("{FN_NS}uppercase"), Arity::Exact(1), |a| a[0].to_uppercase());
        r.register(&format!("{FN_NS}concat"), Arity::AtLeast(0), |a| a.concat());
        r.register(&format!("{FN_NS}substringAfter"), Arity::Exact(2), |a| {
            a[0].find(a[1]).map(|i| a[0][i + a[1].len()..].to_string()).unwrap_or_default()
        });
        r
    }

    pub fn empty() -> Self {
        FunctionRegistry {
            entries: HashMap::new(),
        }
    }

    /// Adds `f` under `iri`, replacing any existing entry.
    pub fn register<F>(&mut self, iri: &str, arity: Arity, f: F) -> &mut Self
    where
        F: Fn(&[&str]) -> String + Send + Sync + 'static,
    {
        self.entries.insert(iri.to_string(), Entry { arity, f: Arc::new(f) });
        self
    }

    pub fn contains(&self, iri: &str) -> bool {
        self.entries.contains_key(iri)
    }

    /// Checks that `iri` exists and takes `n` arguments.
    pub fn check(&self, iri: &str, n: usize) -> Result<(), FunctionError> {
        let entry = self
            .entries
            .get(iri)
            .ok_or_else(|| FunctionError::UnknownFunction(iri.to_string()))?;
        if !entry.arity.accepts(n) {
            return Err(FunctionError::ArityMismatch {
                function: iri.to_string(),
                expected: entry.arity,
                got: n,
            });
        }
        Ok(())
    }

    pub fn apply(&self, iri: &str, args: &[&str]) -> Result<String, FunctionError> {
        self.check(iri, args.len())?;
        Ok((self.entries[iri].f)(args))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(name: &str) -> String {
        format!("{FN_NS}{name}")
    }

    #[test]
    fn builtins() {
        let r = FunctionRegistry::new();
        assert_eq!(r.apply(&f("normalizeSpace"), &["  Kündigung \n  fristlos "]).unwrap(), "Kündigung fristlos");
        assert_eq!(r.apply(&f("trim"), &["x"]).unwrap(), "x");
        assert_eq!(r.apply(&f("trim"), &["\n x y\t"]).unwrap(), "x y");
        assert_eq!(r.apply(&f("concat"), &["a", "b", "c"]).unwrap(), "abc");
        assert_eq!(r.apply(&f("concat"), &[]).unwrap(), "");
        assert_eq!(r.apply(&f("lowercase"), &["ÄB"]).unwrap(), "äb");
        assert_eq!(r.apply(&f("uppercase"), &["äb"]).unwrap(), "ÄB");
        assert_eq!(r.apply(&f("substringAfter"), &["law/10046", "/"]).unwrap(), "10046");
        assert_eq!(r.apply(&f("substringAfter"), &["abc", "z"]).unwrap(), "");
        assert_eq!(r.apply(&f("substringAfter"), &["abc", ""]).unwrap(), "abc");
    }

    #[test]
    fn errors() {
        let r = FunctionRegistry::new();
        assert_eq!(
            r.apply("http://ex.com/nope", &["a"]),
            Err(FunctionError::UnknownFunction("http://ex.com/nope".into()))
        );
        assert!(matches!(
            r.apply(&f("trim"), &["a", "b"]),
            Err(FunctionError::ArityMismatch { got: 2, .. })
        ));
    }

    #[test]
    fn register_and_replace() {
        let mut r = FunctionRegistry::new();
        r.register("http://ex.com/rev", Arity::Exact(1), |a| a[0].chars().rev().collect());
        assert_eq!(r.apply("http://ex.com/rev", &["abc"]).unwrap(), "cba");
        r.register("http://ex.com/rev", Arity::Exact(1), |_| "replaced".into());
        assert_eq!(r.apply("http://ex.com/rev", &["abc"]).unwrap(), "replaced");
        r.register(&f("trim"), Arity::Exact(1), |_| "custom".into());
        assert_eq!(r.apply(&f("trim"), &[" a "]).unwrap(), "custom");
    }
}
