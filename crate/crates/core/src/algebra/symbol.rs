use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, RwLock};

use super::{AlgebraError, Monomial, Polynomial, RewriteSystem, Rule};

/// Handle to an interned symbol. Ordering is creation order within the
/// owning [`SymbolTable`], which is also the variable order of the term order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol(pub(crate) u32);

impl Symbol {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SymbolKind {
    Parameter,
    RhoVariable,
    Extension,
}

#[derive(Debug)]
struct Entry {
    name: Arc<str>,
    kind: SymbolKind,
    /// Defining rule `sym^exponent -> value` for extension symbols.
    rule: Option<(u32, Polynomial)>,
}

#[derive(Debug, Default)]
struct Inner {
    entries: Vec<Entry>,
    by_name: HashMap<Arc<str>, Symbol>,
}

/// Session-scoped symbol interner.
///
/// Creation is serialized behind a lock so a table can be shared between
/// threads; everything else in the algebra layer is an immutable value.
#[derive(Debug, Default)]
pub struct SymbolTable {
    inner: RwLock<Inner>,
}

impl SymbolTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Returns the existing symbol when `name` is already interned with the
    /// same kind.
    pub fn intern(&self, name: &str, kind: SymbolKind) -> Result<Symbol, AlgebraError> {
        if kind == SymbolKind::Extension {
            return Err(AlgebraError::ExtensionWithoutRule(name.to_string()));
        }
        self.intern_inner(name, kind, None)
    }

    pub fn parameter(&self, name: &str) -> Result<Symbol, AlgebraError> {
        self.intern(name, SymbolKind::Parameter)
    }

    pub fn rho(&self, name: &str) -> Result<Symbol, AlgebraError> {
        self.intern(name, SymbolKind::RhoVariable)
    }

    /// Adjoins an algebraic extension `name` with defining rule
    /// `name^exponent = value`. The value must not mention `name`.
    pub fn extension(
        &self,
        name: &str,
        exponent: u32,
        value: Polynomial,
    ) -> Result<Symbol, AlgebraError> {
        if exponent < 2 {
            return Err(AlgebraError::InvalidRule(format!(
                "extension {name} needs an exponent of at least 2"
            )));
        }
        self.intern_inner(name, SymbolKind::Extension, Some((exponent, value)))
    }

    fn intern_inner(
        &self,
        name: &str,
        kind: SymbolKind,
        rule: Option<(u32, Polynomial)>,
    ) -> Result<Symbol, AlgebraError> {
        if !is_identifier(name) {
            return Err(AlgebraError::InvalidName(name.to_string()));
        }
        let mut inner = self.inner.write().expect("symbol table poisoned");
        if let Some(&sym) = inner.by_name.get(name) {
            let existing = inner.entries[sym.index()].kind;
            if existing != kind || rule.is_some() {
                return Err(AlgebraError::SymbolRedeclared(name.to_string()));
            }
            return Ok(sym);
        }
        let sym = Symbol(inner.entries.len() as u32);
        if let Some((_, value)) = &rule {
            if value.degree_in(sym) > 0 {
                return Err(AlgebraError::InvalidRule(format!(
                    "extension {name} defined in terms of itself"
                )));
            }
        }
        let name: Arc<str> = Arc::from(name);
        inner.entries.push(Entry { name: name.clone(), kind, rule });
        inner.by_name.insert(name, sym);
        Ok(sym)
    }

    pub fn lookup(&self, name: &str) -> Option<Symbol> {
        self.inner.read().expect("symbol table poisoned").by_name.get(name).copied()
    }

    pub fn name(&self, sym: Symbol) -> Arc<str> {
        self.inner.read().expect("symbol table poisoned").entries[sym.index()].name.clone()
    }

    pub fn kind(&self, sym: Symbol) -> SymbolKind {
        self.inner.read().expect("symbol table poisoned").entries[sym.index()].kind
    }

    pub fn len(&self) -> usize {
        self.inner.read().expect("symbol table poisoned").entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn symbols(&self) -> Vec<Symbol> {
        (0..self.len() as u32).map(Symbol).collect()
    }

    pub fn symbols_of_kind(&self, kind: SymbolKind) -> Vec<Symbol> {
        let inner = self.inner.read().expect("symbol table poisoned");
        inner
            .entries
            .iter()
            .enumerate()
            .filter(|(_, e)| e.kind == kind)
            .map(|(i, _)| Symbol(i as u32))
            .collect()
    }

    /// The defining rule of an extension symbol, as `(exponent, value)`.
    pub fn extension_rule(&self, sym: Symbol) -> Option<(u32, Polynomial)> {
        self.inner.read().expect("symbol table poisoned").entries[sym.index()]
            .rule
            .clone()
    }

    /// Rewrite system made of every extension's defining rule.
    pub fn extension_rules(&self) -> RewriteSystem {
        let inner = self.inner.read().expect("symbol table poisoned");
        let rules = inner
            .entries
            .iter()
            .enumerate()
            .filter_map(|(i, e)| {
                e.rule.as_ref().map(|(exp, value)| {
                    Rule::new(Monomial::power(Symbol(i as u32), *exp), value.clone())
                        .expect("extension rules are degree-decreasing")
                })
            })
            .collect();
        RewriteSystem::new(rules).expect("extension rules are degree-decreasing")
    }

    /// Display adapter for a single symbol.
    pub fn display(&self, sym: Symbol) -> impl fmt::Display + '_ {
        struct D<'a>(&'a SymbolTable, Symbol);
        impl fmt::Display for D<'_> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0.name(self.1))
            }
        }
        D(self, sym)
    }
}

pub(crate) fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}
