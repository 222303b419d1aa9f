//! Terms over a ranked alphabet and the neat well-ordering of a term algebra.
//!
//! [`Term<V>`] is generic in its variables so that terms over terms (the
//! double term algebra) are ordinary values of type `Term<Term<usize>>`.
//! The [`Ord`] impl on terms *is* the neat order: shape length first, then
//! the rendered shape string under `ξ < Ω < ( < , < )`, then the tuple of
//! variables in order of occurrence. Symbol indices follow signature order,
//! so the comparison needs no signature at hand.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt::Write;

use serde::{Deserialize, Serialize};

use crate::chains::{ChainMap, index_tuple};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Symbol {
    pub name: String,
    pub arity: usize,
}

/// A finite ranked alphabet; the order of `symbols` is the well-ordering of Ω.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawSignature")]
pub struct Signature {
    symbols: Vec<Symbol>,
}

#[derive(Deserialize)]
struct RawSignature {
    symbols: Vec<Symbol>,
}

impl TryFrom<RawSignature> for Signature {
    type Error = Error;
    fn try_from(raw: RawSignature) -> Result<Self> {
        Signature::new(raw.symbols)
    }
}

impl Signature {
    pub fn new(symbols: Vec<Symbol>) -> Result<Self> {
        for (i, s) in symbols.iter().enumerate() {
            if s.name.is_empty() {
                return Err(Error::InvalidSignature("empty symbol name".into()));
            }
            if symbols[..i].iter().any(|t| t.name == s.name) {
                return Err(Error::InvalidSignature(format!("duplicate symbol `{}`", s.name)));
            }
        }
        Ok(Signature { symbols })
    }

    /// Shorthand for tests and catalogs: `[("meet", 2)]`.
    pub fn from_pairs(pairs: &[(&str, usize)]) -> Result<Self> {
        Signature::new(
            pairs
                .iter()
                .map(|&(name, arity)| Symbol {
                    name: name.to_string(),
                    arity,
                })
                .collect(),
        )
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn arity(&self, symbol: usize) -> usize {
        self.symbols[symbol].arity
    }

    pub fn name(&self, symbol: usize) -> &str {
        &self.symbols[symbol].name
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.symbols.iter().position(|s| s.name == name)
    }

    pub fn constants(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(|&i| self.arity(i) == 0)
    }

    pub fn functions(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(|&i| self.arity(i) > 0)
    }
}

/// A term whose variables are of type `V`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Term<V = usize> {
    Var(V),
    App(usize, Vec<Term<V>>),
}

/// The unit: a variable viewed as a term.
pub fn unit<V>(x: V) -> Term<V> {
    Term::Var(x)
}

impl<V> Term<V> {
    pub fn constant(symbol: usize) -> Self {
        Term::App(symbol, Vec::new())
    }

    pub fn app(symbol: usize, args: Vec<Term<V>>) -> Self {
        Term::App(symbol, args)
    }

    /// Number of symbols in the rendered string, counting each variable,
    /// constant, parenthesis and comma as one symbol.
    pub fn shape_length(&self) -> usize {
        match self {
            Term::Var(_) => 1,
            Term::App(_, args) if args.is_empty() => 1,
            Term::App(_, args) => args.len() + 2 + args.iter().map(Term::shape_length).sum::<usize>(),
        }
    }

    /// Variables in order of occurrence.
    pub fn vars(&self) -> Vec<&V> {
        let mut out = Vec::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars<'a>(&'a self, out: &mut Vec<&'a V>) {
        match self {
            Term::Var(v) => out.push(v),
            Term::App(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
        }
    }

    /// Substitution of variables along `f`: the action of the term functor on maps.
    pub fn map_vars<W>(&self, f: &mut impl FnMut(&V) -> W) -> Term<W> {
        match self {
            Term::Var(v) => Term::Var(f(v)),
            Term::App(s, args) => Term::App(*s, args.iter().map(|a| a.map_vars(f)).collect()),
        }
    }

    /// Fallible variant of [`Term::map_vars`].
    pub fn try_map_vars<W, E>(&self, f: &mut impl FnMut(&V) -> core::result::Result<W, E>) -> core::result::Result<Term<W>, E> {
        Ok(match self {
            Term::Var(v) => Term::Var(f(v)?),
            Term::App(s, args) => Term::App(
                *s,
                args.iter().map(|a| a.try_map_vars(f)).collect::<core::result::Result<_, _>>()?,
            ),
        })
    }

    pub fn shape(&self) -> Shape {
        Shape(self.map_vars(&mut |_| ()))
    }

    /// The rendered shape string as letters of the alphabet `ξ < Ω < ( < , < )`.
    pub fn shape_string(&self) -> Vec<Letter> {
        let mut out = Vec::new();
        self.push_letters(&mut out);
        out
    }

    fn push_letters(&self, out: &mut Vec<Letter>) {
        match self {
            Term::Var(_) => out.push(Letter::Xi),
            Term::App(s, args) => {
                out.push(Letter::Symbol(*s));
                if !args.is_empty() {
                    out.push(Letter::Open);
                    for (i, a) in args.iter().enumerate() {
                        if i > 0 {
                            out.push(Letter::Comma);
                        }
                        a.push_letters(out);
                    }
                    out.push(Letter::Close);
                }
            }
        }
    }

    /// Checks arities against `sig`.
    pub fn check_arities(&self, sig: &Signature) -> Result<()> {
        match self {
            Term::Var(_) => Ok(()),
            Term::App(s, args) => {
                if *s >= sig.len() {
                    return Err(Error::InvalidTerm(format!("unknown symbol index {s}")));
                }
                if sig.arity(*s) != args.len() {
                    return Err(Error::InvalidTerm(format!(
                        "`{}` expects {} arguments, found {}",
                        sig.name(*s),
                        sig.arity(*s),
                        args.len()
                    )));
                }
                args.iter().try_for_each(|a| a.check_arities(sig))
            }
        }
    }
}

impl<V: Clone> Term<V> {
    pub fn neat_key(&self) -> NeatKey<V> {
        NeatKey {
            shape_length: self.shape_length(),
            shape_string: self.shape_string(),
            var_tuple: self.vars().into_iter().cloned().collect(),
        }
    }
}

impl Term<usize> {
    /// Validates arities and that every variable lies in the chain `0..nvars`.
    pub fn check(&self, sig: &Signature, nvars: usize) -> Result<()> {
        self.check_arities(sig)?;
        match self.vars().into_iter().find(|&&x| x >= nvars) {
            Some(&x) => Err(Error::InvalidTerm(format!("variable x{} outside a chain of {nvars}", x + 1))),
            None => Ok(()),
        }
    }

    pub fn max_var(&self) -> Option<usize> {
        self.vars().into_iter().copied().max()
    }
}

/// Letters of the rendered alphabet, in their well-order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Letter {
    Xi,
    Symbol(usize),
    Open,
    Comma,
    Close,
}

/// Sort key realizing the neat order.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct NeatKey<V> {
    pub shape_length: usize,
    pub shape_string: Vec<Letter>,
    pub var_tuple: Vec<V>,
}

fn letters_cmp<V>(a: &Term<V>, b: &Term<V>) -> Ordering {
    a.shape_string().cmp(&b.shape_string())
}

/// The neat order on terms over an ordered variable type.
pub fn neat_compare<V: Ord>(a: &Term<V>, b: &Term<V>) -> Ordering {
    a.shape_length()
        .cmp(&b.shape_length())
        .then_with(|| letters_cmp(a, b))
        .then_with(|| a.vars().cmp(&b.vars()))
}

impl<V: Ord> PartialOrd for Term<V> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<V: Ord> Ord for Term<V> {
    fn cmp(&self, other: &Self) -> Ordering {
        neat_compare(self, other)
    }
}

/// A term whose every variable is the distinguished symbol ξ.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Shape(pub Term<()>);

impl Shape {
    pub fn xi() -> Self {
        Shape(Term::Var(()))
    }

    pub fn term(&self) -> &Term<()> {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.shape_length()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Number of ξ occurrences.
    pub fn holes(&self) -> usize {
        self.0.vars().len()
    }

    /// Fills the holes left to right with `vars`.
    pub fn instantiate<V: Clone>(&self, vars: &[V]) -> Term<V> {
        let mut it = vars.iter();
        let t = self.0.map_vars(&mut |_| it.next().expect("too few variables").clone());
        debug_assert!(it.next().is_none());
        t
    }

    pub fn render(&self, sig: &Signature) -> String {
        render(&self.0, sig)
    }
}

/// How a variable is printed.
pub trait RenderVar {
    fn render_var(&self, sig: &Signature, out: &mut String);
}

impl RenderVar for usize {
    fn render_var(&self, _: &Signature, out: &mut String) {
        let _ = write!(out, "x{}", self + 1);
    }
}

impl RenderVar for () {
    fn render_var(&self, _: &Signature, out: &mut String) {
        out.push('ξ');
    }
}

impl<V: RenderVar> RenderVar for Term<V> {
    fn render_var(&self, sig: &Signature, out: &mut String) {
        out.push('⟨');
        render_into(self, sig, out);
        out.push('⟩');
    }
}

/// Canonical string `f(t1,…,tn)`; constants and variables are bare.
pub fn render<V: RenderVar>(t: &Term<V>, sig: &Signature) -> String {
    let mut out = String::new();
    render_into(t, sig, &mut out);
    out
}

fn render_into<V: RenderVar>(t: &Term<V>, sig: &Signature, out: &mut String) {
    match t {
        Term::Var(v) => v.render_var(sig, out),
        Term::App(s, args) => {
            out.push_str(sig.name(*s));
            if !args.is_empty() {
                out.push('(');
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    render_into(a, sig, out);
                }
                out.push(')');
            }
        }
    }
}

pub fn shape_of<V>(t: &Term<V>) -> Shape {
    t.shape()
}

/// Lazily built table of shapes grouped by length, each group in neat order.
#[derive(Clone, Debug)]
pub struct ShapeTable {
    sig: Signature,
    by_length: Vec<Vec<Shape>>,
}

impl ShapeTable {
    pub fn new(sig: &Signature) -> Self {
        ShapeTable {
            sig: sig.clone(),
            by_length: vec![Vec::new()],
        }
    }

    pub fn signature(&self) -> &Signature {
        &self.sig
    }

    /// Shapes of exactly `len` symbols, sorted.
    pub fn shapes(&mut self, len: usize) -> &[Shape] {
        while self.by_length.len() <= len {
            let l = self.by_length.len();
            let block = self.build(l);
            self.by_length.push(block);
        }
        &self.by_length[len]
    }

    fn build(&self, len: usize) -> Vec<Shape> {
        let mut out = Vec::new();
        if len == 1 {
            out.push(Shape::xi());
        }
        for s in 0..self.sig.len() {
            let arity = self.sig.arity(s);
            if arity == 0 {
                if len == 1 {
                    out.push(Shape(Term::constant(s)));
                }
                continue;
            }
            if len < arity + 2 + arity {
                continue;
            }
            let budget = len - arity - 2;
            let mut parts = Vec::with_capacity(arity);
            self.compose_children(s, arity, budget, &mut parts, &mut out);
        }
        out.sort_by_cached_key(|sh| sh.0.shape_string());
        out
    }

    fn compose_children(&self, symbol: usize, arity: usize, budget: usize, parts: &mut Vec<usize>, out: &mut Vec<Shape>) {
        if parts.len() == arity {
            if budget == 0 {
                let choices: Vec<&[Shape]> = parts.iter().map(|&p| self.by_length[p].as_slice()).collect();
                cartesian(&choices, &mut Vec::new(), &mut |kids: &[&Shape]| {
                    out.push(Shape(Term::App(symbol, kids.iter().map(|k| k.0.clone()).collect())));
                });
            }
            return;
        }
        let left = arity - parts.len() - 1;
        for p in 1..=budget.saturating_sub(left) {
            if budget - p < left {
                break;
            }
            parts.push(p);
            self.compose_children(symbol, arity, budget - p, parts, out);
            parts.pop();
        }
    }

    /// Every term over `nvars` variables whose shape has exactly `len`
    /// symbols, in neat order.
    pub fn block(&mut self, nvars: usize, len: usize) -> Vec<Term> {
        let mut out = Vec::new();
        for sh in self.shapes(len).to_vec() {
            let holes = sh.holes();
            if holes > 0 && nvars == 0 {
                continue;
            }
            let count = nvars.pow(holes as u32);
            for i in 0..count {
                out.push(sh.instantiate(&index_tuple(i, nvars.max(1), holes)));
            }
        }
        out
    }
}

fn cartesian<'a, T>(choices: &[&'a [T]], acc: &mut Vec<&'a T>, f: &mut impl FnMut(&[&'a T])) {
    if acc.len() == choices.len() {
        f(acc);
        return;
    }
    for item in choices[acc.len()] {
        acc.push(item);
        cartesian(choices, acc, f);
        acc.pop();
    }
}

/// All terms over `nvars` variables with shape length at most `max_len`,
/// sorted in neat order. The result is an initial segment of the full order.
pub fn enumerate_neat(sig: &Signature, nvars: usize, max_len: usize) -> Vec<Term> {
    let mut table = ShapeTable::new(sig);
    (1..=max_len).flat_map(|l| table.block(nvars, l)).collect()
}

/// Replaces every variable `x` by `f(x)`.
pub fn substitute(f: &ChainMap, t: &Term) -> Result<Term> {
    t.try_map_vars(&mut |&x| {
        if x < f.n {
            Ok(f.table[x])
        } else {
            Err(Error::InvalidTerm(format!("variable x{} outside the domain of a map on {}", x + 1, f.n)))
        }
    })
}

/// Substitution of terms for variables: the multiplication of the term monad.
pub fn flatten<V: Clone>(tt: &Term<Term<V>>) -> Term<V> {
    match tt {
        Term::Var(inner) => inner.clone(),
        Term::App(s, args) => Term::App(*s, args.iter().map(flatten).collect()),
    }
}

/// All terms of the double term algebra that flatten to `t`.
pub fn flatten_preimages(t: &Term) -> Vec<Term<Term>> {
    let mut out = vec![Term::Var(t.clone())];
    if let Term::App(s, args) = t {
        let per_arg: Vec<Vec<Term<Term>>> = args.iter().map(flatten_preimages).collect();
        let slices: Vec<&[Term<Term>]> = per_arg.iter().map(Vec::as_slice).collect();
        cartesian(&slices, &mut Vec::new(), &mut |kids: &[&Term<Term>]| {
            out.push(Term::App(*s, kids.iter().map(|&k| k.clone()).collect()));
        });
    }
    out
}

fn index_of_all(terms: &[Term]) -> BTreeMap<&Term, usize> {
    terms.iter().enumerate().map(|(i, t)| (t, i)).collect()
}

/// The substitution map between truncated neat chains, as a [`ChainMap`].
///
/// Truncating both sides at the same shape length is sound because
/// substitution preserves shapes.
pub fn substitution_chain_map(f: &ChainMap, sig: &Signature, max_len: usize) -> Result<ChainMap> {
    let dom = enumerate_neat(sig, f.n, max_len);
    let cod = enumerate_neat(sig, f.k, max_len);
    let index = index_of_all(&cod);
    let table = dom
        .iter()
        .map(|t| {
            let s = substitute(f, t)?;
            index
                .get(&s)
                .copied()
                .ok_or_else(|| Error::InvalidTerm("substitution left the truncation".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    ChainMap::new(dom.len(), cod.len(), table)
}

/// Whether substitution along the rigid surjection `f` is a rigid surjection
/// of the truncated neat chains.
pub fn check_subst_rigid(f: &ChainMap, sig: &Signature, max_len: usize) -> Result<bool> {
    if !f.is_rigid_surjection() {
        return Err(Error::NotRigid);
    }
    Ok(substitution_chain_map(f, sig, max_len)?.is_rigid_surjection())
}

/// Whether the minimal substitution preimage of every term `s` is `s` with
/// each variable `y` replaced by `min f⁻¹(y)`.
pub fn check_subst_minima(f: &ChainMap, sig: &Signature, max_len: usize) -> Result<bool> {
    let dual = f.dual_embedding()?;
    let dom = enumerate_neat(sig, f.n, max_len);
    let cod = enumerate_neat(sig, f.k, max_len);
    let map = substitution_chain_map(f, sig, max_len)?;
    let minima = map.dual_embedding()?;
    for (j, s) in cod.iter().enumerate() {
        if dom[minima.table[j]] != substitute(&dual, s)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Whether flattening is a rigid surjection onto the truncated term chain:
/// each term's minimal flatten-preimage is its wrapper `⟨t⟩`, and wrappers
/// are ordered like the terms they wrap.
pub fn check_mu_rigid(sig: &Signature, nvars: usize, max_len: usize) -> bool {
    let terms = enumerate_neat(sig, nvars, max_len);
    let wrapped: Vec<Term<Term>> = terms.iter().cloned().map(unit).collect();
    if wrapped.windows(2).any(|w| w[0] >= w[1]) {
        return false;
    }
    terms.iter().zip(&wrapped).all(|(t, w)| {
        flatten(w) == *t && flatten_preimages(t).iter().all(|p| flatten(p) == *t && p >= w)
    })
}
