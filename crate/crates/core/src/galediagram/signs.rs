//! Sign algebra of planar Gale configurations.
//!
//! Two kinds of variables: `<ab>` for the sign of `ab⊥` and `[abc]` for the
//! sign of the triangle orientation. Both are stored for increasing indices;
//! other orders pick up the permutation parity.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{edge_indices, GaleConfig, GaleError};
use crate::polytope::{dual_graph, Params, VertexLabel};
use crate::rational::signum;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Neg,
    Zero,
    Pos,
}

impl Sign {
    pub fn from_i8(x: i8) -> Self {
        match x.signum() {
            -1 => Sign::Neg,
            0 => Sign::Zero,
            _ => Sign::Pos,
        }
    }

    pub fn to_i8(self) -> i8 {
        match self {
            Sign::Neg => -1,
            Sign::Zero => 0,
            Sign::Pos => 1,
        }
    }

    pub fn times(self, parity: i8) -> Self {
        Sign::from_i8(self.to_i8() * parity)
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Neg => '-',
            Sign::Zero => '0',
            Sign::Pos => '+',
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.trim() {
            "+" => Some(Sign::Pos),
            "0" => Some(Sign::Zero),
            "-" => Some(Sign::Neg),
            _ => None,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

impl Serialize for Sign {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Sign {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Sign::parse(&s).ok_or_else(|| serde::de::Error::custom(format!("bad sign {s:?}")))
    }
}

/// A sign variable with increasing indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    S(u8, u8),
    T(u8, u8, u8),
}

/// Sorts `idx` in place, returning the permutation parity (0 on repeats).
fn sort_parity(idx: &mut [u8]) -> i8 {
    let mut parity = 1;
    for i in 0..idx.len() {
        for j in 0..idx.len() - 1 - i {
            if idx[j] > idx[j + 1] {
                idx.swap(j, j + 1);
                parity = -parity;
            } else if idx[j] == idx[j + 1] {
                return 0;
            }
        }
    }
    if idx.windows(2).any(|w| w[0] == w[1]) {
        0
    } else {
        parity
    }
}

impl Var {
    /// `<ab>` as a normalized variable and parity; `None` for `a == b`.
    pub fn s(a: u8, b: u8) -> Option<(Var, i8)> {
        let mut idx = [a, b];
        match sort_parity(&mut idx) {
            0 => None,
            p => Some((Var::S(idx[0], idx[1]), p)),
        }
    }

    pub fn t(a: u8, b: u8, c: u8) -> Option<(Var, i8)> {
        let mut idx = [a, b, c];
        match sort_parity(&mut idx) {
            0 => None,
            p => Some((Var::T(idx[0], idx[1], idx[2]), p)),
        }
    }

    pub fn indices(&self) -> Vec<u8> {
        match *self {
            Var::S(a, b) => vec![a, b],
            Var::T(a, b, c) => vec![a, b, c],
        }
    }

    pub fn render(&self, zero_based: bool) -> String {
        let idx: Vec<u8> = self.indices().into_iter().map(|i| if zero_based { i - 1 } else { i }).collect();
        let body = if idx.iter().all(|&i| i < 10) {
            idx.iter().map(u8::to_string).collect::<String>()
        } else {
            idx.iter().map(u8::to_string).collect::<Vec<_>>().join(",")
        };
        match self {
            Var::S(..) => format!("<{body}>"),
            Var::T(..) => format!("[{body}]"),
        }
    }

    /// Parses `[257]`, `<12>` or comma-separated forms; reorders indices,
    /// returning the parity alongside.
    pub fn parse(text: &str, zero_based: bool) -> Option<(Var, i8)> {
        let text = text.trim();
        let (open, close) = (text.chars().next()?, text.chars().last()?);
        let body = &text[1..text.len() - 1];
        let mut idx: Vec<u8> = if body.contains(',') {
            body.split(',').map(|p| p.trim().parse().ok()).collect::<Option<_>>()?
        } else {
            body.chars().map(|c| c.to_digit(10).map(|x| x as u8)).collect::<Option<_>>()?
        };
        if zero_based {
            idx.iter_mut().for_each(|i| *i += 1);
        }
        match (open, close, idx.len()) {
            ('<', '>', 2) => Var::s(idx[0], idx[1]),
            ('[', ']', 3) => Var::t(idx[0], idx[1], idx[2]),
            _ => None,
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(false))
    }
}

impl Serialize for Var {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.render(false))
    }
}

impl<'de> Deserialize<'de> for Var {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        match Var::parse(&s, false) {
            Some((v, 1)) => Ok(v),
            _ => Err(serde::de::Error::custom(format!("bad sign variable {s:?}"))),
        }
    }
}

/// Partial assignment of signs to all `<ab>` and `[abc]` over `1..=n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignState {
    n: u8,
    labels: Vec<VertexLabel>,
    s: Vec<Option<Sign>>,
    t: Vec<Option<Sign>>,
}

impl SignState {
    /// Everything unknown.
    pub fn new(params: Params) -> Result<Self, GaleError> {
        let graph = dual_graph(params)?;
        let n = params.n;
        Ok(Self { n: n as u8, labels: graph.vertices, s: vec![None; n * n], t: vec![None; n * n * n] })
    }

    pub fn n(&self) -> u8 {
        self.n
    }

    pub fn labels(&self) -> &[VertexLabel] {
        &self.labels
    }

    fn slot(&self, var: Var) -> usize {
        let n = self.n as usize;
        match var {
            Var::S(a, b) => (a as usize - 1) * n + (b as usize - 1),
            Var::T(a, b, c) => ((a as usize - 1) * n + (b as usize - 1)) * n + (c as usize - 1),
        }
    }

    pub fn get(&self, var: Var) -> Option<Sign> {
        let i = self.slot(var);
        match var {
            Var::S(..) => self.s[i],
            Var::T(..) => self.t[i],
        }
    }

    /// Sign of `ab⊥`; zero for `a == b`.
    pub fn s_of(&self, a: u8, b: u8) -> Option<Sign> {
        match Var::s(a, b) {
            None => Some(Sign::Zero),
            Some((v, p)) => self.get(v).map(|x| x.times(p)),
        }
    }

    /// Sign of `[abc]`; zero on repeated indices.
    pub fn t_of(&self, a: u8, b: u8, c: u8) -> Option<Sign> {
        match Var::t(a, b, c) {
            None => Some(Sign::Zero),
            Some((v, p)) => self.get(v).map(|x| x.times(p)),
        }
    }

    /// Records `var = sign`; `Ok(true)` if this is new information.
    pub fn set(&mut self, var: Var, sign: Sign) -> Result<bool, GaleError> {
        let i = self.slot(var);
        let cell = match var {
            Var::S(..) => &mut self.s[i],
            Var::T(..) => &mut self.t[i],
        };
        match *cell {
            Some(had) if had == sign => Ok(false),
            Some(had) => Err(GaleError::Contradiction { var, had, new: sign }),
            None => {
                *cell = Some(sign);
                Ok(true)
            }
        }
    }

    fn set_t(&mut self, a: u8, b: u8, c: u8, sign: Sign) -> Result<bool, GaleError> {
        match Var::t(a, b, c) {
            Some((v, p)) => self.set(v, sign.times(p)),
            None => Ok(false),
        }
    }

    /// All known variables in increasing order.
    pub fn known(&self) -> Vec<(Var, Sign)> {
        self.variables().into_iter().filter_map(|v| self.get(v).map(|s| (v, s))).collect()
    }

    pub fn variables(&self) -> Vec<Var> {
        let n = self.n;
        let mut out = Vec::new();
        for a in 1..=n {
            for b in a + 1..=n {
                out.push(Var::S(a, b));
            }
        }
        for a in 1..=n {
            for b in a + 1..=n {
                for c in b + 1..=n {
                    out.push(Var::T(a, b, c));
                }
            }
        }
        out
    }

    fn is_label(&self, a: u8, b: u8, c: u8) -> bool {
        let mut idx = [a, b, c];
        idx.sort_unstable();
        self.labels.binary_search(&VertexLabel(idx)).is_ok()
    }

    /// Closes the state under the deduction rules, returning newly fixed
    /// variables in the order they were found.
    fn close(&mut self) -> Result<Vec<(Var, Sign)>, GaleError> {
        let n = self.n;
        let mut found = Vec::new();
        loop {
            let mut changed = false;
            // R1: [abc] = ab⊥ + bc⊥ + ca⊥
            for a in 1..=n {
                for b in a + 1..=n {
                    for c in b + 1..=n {
                        let (Some(x), Some(y), Some(z)) = (self.s_of(a, b), self.s_of(b, c), self.s_of(c, a)) else {
                            continue;
                        };
                        let terms = [x, y, z];
                        let value = if terms.iter().all(|&s| s == Sign::Zero) {
                            Sign::Zero
                        } else if terms.iter().all(|&s| s != Sign::Neg) {
                            Sign::Pos
                        } else if terms.iter().all(|&s| s != Sign::Pos) {
                            Sign::Neg
                        } else {
                            continue;
                        };
                        if self.set_t(a, b, c, value)? {
                            changed = true;
                            found.push((Var::T(a, b, c), value));
                        }
                    }
                }
            }
            // R2: i, j, k clockwise in a cone, [ijk] = +, and {i,k,l} a vertex
            // label give [ilj] = [jlk] = +
            for i in 1..=n {
                for j in 1..=n {
                    for k in 1..=n {
                        if i == j || j == k || i == k {
                            continue;
                        }
                        let clockwise = [self.s_of(i, j), self.s_of(j, k), self.s_of(i, k)]
                            .iter()
                            .all(|&s| s == Some(Sign::Neg));
                        if !clockwise || self.t_of(i, j, k) != Some(Sign::Pos) {
                            continue;
                        }
                        for l in 1..=n {
                            if l == i || l == j || l == k || !self.is_label(i, k, l) {
                                continue;
                            }
                            for (a, b, c) in [(i, l, j), (j, l, k)] {
                                if self.set_t(a, b, c, Sign::Pos)? {
                                    changed = true;
                                    let (v, p) = Var::t(a, b, c).expect("distinct indices");
                                    found.push((v, Sign::Pos.times(p)));
                                }
                            }
                        }
                    }
                }
            }
            if !changed {
                return Ok(found);
            }
        }
    }
}

/// Result of [`deduce_signs`]: the closed state and what it added.
#[derive(Debug, Clone)]
pub struct Deduction {
    pub state: SignState,
    pub deduced: Vec<(Var, Sign)>,
}

/// Adds `assumption` (if any) and closes under the deduction rules.
pub fn deduce_signs(state: &SignState, assumption: Option<(Var, Sign)>) -> Result<Deduction, GaleError> {
    let mut next = state.clone();
    if let Some((v, s)) = assumption {
        next.set(v, s)?;
    }
    let deduced = next.close()?;
    Ok(Deduction { state: next, deduced })
}

/// Signs every configuration in the labelling convention must have: each
/// vertex-label triangle `{a<b<c}` is anticlockwise around the origin, so
/// `[abc] = <ab> = <bc> = +` and `<ac> = -`. Even `d` only.
pub fn forced_signs(params: Params) -> Result<SignState, GaleError> {
    params.require_corank3()?;
    if params.d % 2 == 1 {
        return Err(GaleError::OddDimension(params.d));
    }
    let mut state = SignState::new(params)?;
    for l in state.labels.clone() {
        let [a, b, c] = l.0;
        state.set(Var::T(a, b, c), Sign::Pos)?;
        state.set(Var::S(a, b), Sign::Pos)?;
        state.set(Var::S(b, c), Sign::Pos)?;
        state.set(Var::S(a, c), Sign::Neg)?;
    }
    state.close()?;
    Ok(state)
}

/// Every sign read off the coordinates.
pub fn numeric_signs(cfg: &GaleConfig) -> Result<SignState, GaleError> {
    let params = Params::corank3(cfg.len().saturating_sub(3))?;
    let mut state = SignState::new(params)?;
    for v in state.variables() {
        let x = match v {
            Var::S(a, b) => cfg.perp(a, b),
            Var::T(a, b, c) => cfg.bracket(a, b, c),
        };
        state.set(v, Sign::from_i8(signum(&x)))?;
    }
    Ok(state)
}

/// A product `coef * v_1 * v_2 * ...` of a constant sign and unknown
/// variables.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignTerm {
    pub coef: i8,
    pub vars: Vec<Var>,
}

impl SignTerm {
    pub fn constant(sign: Sign) -> Self {
        Self { coef: sign.to_i8(), vars: Vec::new() }
    }

    /// Product of literals `(var, parity)` with a leading constant.
    pub fn product(coef: i8, literals: &[(Var, i8)]) -> Self {
        let mut coef = coef;
        let mut vars = Vec::new();
        for &(v, p) in literals {
            coef *= p;
            vars.push(v);
        }
        vars.sort_unstable();
        Self { coef, vars }
    }

    /// Substitutes every variable known in `state`.
    pub fn evaluate(&self, state: &SignState) -> Self {
        let mut coef = self.coef;
        let mut vars = Vec::new();
        for &v in &self.vars {
            match state.get(v) {
                Some(s) => coef *= s.to_i8(),
                None => vars.push(v),
            }
        }
        if coef == 0 {
            vars.clear();
        }
        Self { coef, vars }
    }

    /// The sign, when no unknowns remain.
    pub fn determined(&self) -> Option<Sign> {
        if self.coef == 0 || self.vars.is_empty() {
            Some(Sign::from_i8(self.coef))
        } else {
            None
        }
    }

    pub fn render(&self, zero_based: bool) -> String {
        if let Some(s) = self.determined() {
            return s.to_string();
        }
        let sign = if self.coef < 0 { "-" } else { "" };
        let body: Vec<String> = self.vars.iter().map(|v| v.render(zero_based)).collect();
        format!("{sign}{}", body.join(""))
    }
}

impl fmt::Display for SignTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(false))
    }
}

/// Sign-mode coefficients of `z_p - z_q` over `(h_i, h_j, h_k, h_l)`:
/// `<ij>[jkl]/([ijk][ijl])`, `<ij>[kil]/([ijk][ijl])`, `<ij>/[ijk]`,
/// `-<ij>/[ijl]`, before substitution.
pub fn edge_sign_terms(p: &VertexLabel, q: &VertexLabel) -> Result<([u8; 4], [SignTerm; 4]), GaleError> {
    let [i, j, k, l] = edge_indices(p, q)?;
    let lit_t = |a, b, c| Var::t(a, b, c).expect("distinct indices");
    let ij = Var::s(i, j).expect("distinct indices");
    let (ijk, ijl) = (lit_t(i, j, k), lit_t(i, j, l));
    let terms = [
        SignTerm::product(1, &[ij, lit_t(j, k, l), ijk, ijl]),
        SignTerm::product(1, &[ij, lit_t(k, i, l), ijk, ijl]),
        SignTerm::product(1, &[ij, ijk]),
        SignTerm::product(-1, &[ij, ijl]),
    ];
    Ok(([i, j, k, l], terms))
}

/// [`edge_sign_terms`] with everything known in `state` substituted.
pub fn edge_signs(state: &SignState, p: &VertexLabel, q: &VertexLabel) -> Result<([u8; 4], [SignTerm; 4]), GaleError> {
    let (cols, terms) = edge_sign_terms(p, q)?;
    Ok((cols, terms.map(|t| t.evaluate(state))))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn state4() -> SignState {
        forced_signs(Params::corank3(4).unwrap()).unwrap()
    }

    #[test]
    fn forced_examples() {
        let s = state4();
        assert_eq!(s.t_of(1, 2, 5), Some(Sign::Pos));
        assert_eq!(s.t_of(2, 5, 7), None);
        assert_eq!(s.s_of(5, 6), Some(Sign::Pos));
        assert_eq!(s.s_of(6, 5), Some(Sign::Neg));
        let again = deduce_signs(&s, None).unwrap();
        assert!(again.deduced.is_empty());
        assert_eq!(again.state, s);
    }

    #[test]
    fn odd_dimension_is_rejected() {
        assert!(matches!(forced_signs(Params::corank3(5).unwrap()), Err(GaleError::OddDimension(5))));
    }

    #[test]
    fn deductions_match_hand_derivations() {
        let s = state4();
        let (v, _) = Var::t(2, 5, 7).unwrap();
        let d = deduce_signs(&s, Some((v, Sign::Pos))).unwrap();
        assert_eq!(d.state.t_of(1, 5, 7), Some(Sign::Neg));

        let s6 = forced_signs(Params::corank3(6).unwrap()).unwrap();
        // 0-based [057] = + gives [578] = -
        let d = deduce_signs(&s6, Some((Var::T(1, 6, 8), Sign::Pos))).unwrap();
        assert_eq!(d.state.t_of(6, 8, 9), Some(Sign::Neg));
    }

    #[test]
    fn contradictions_are_reported() {
        let s = state4();
        assert!(deduce_signs(&s, Some((Var::T(1, 2, 5), Sign::Neg))).is_err());
    }

    #[test]
    fn sign_rows_match_hand_computation() {
        let mut s = state4();
        // over (h_5, h_6, h_7, h_2)
        let (cols, terms) = edge_signs(&s, &VertexLabel::new(5, 6, 7), &VertexLabel::new(2, 5, 6)).unwrap();
        assert_eq!(cols, [5, 6, 7, 2]);
        assert_eq!(terms[1].render(false), "-[257]");
        assert_eq!(terms[2].determined(), Some(Sign::Pos));
        assert_eq!(terms[3].determined(), Some(Sign::Neg));
        s.set(Var::T(2, 5, 7), Sign::Pos).unwrap();
        let (_, terms) = edge_signs(&s, &VertexLabel::new(5, 6, 7), &VertexLabel::new(2, 5, 6)).unwrap();
        assert_eq!(terms[1].determined(), Some(Sign::Neg));
    }

    #[test]
    fn var_text_round_trip() {
        for (text, var, parity) in [("[257]", Var::T(2, 5, 7), 1), ("[752]", Var::T(2, 5, 7), -1), ("<21>", Var::S(1, 2), -1)] {
            assert_eq!(Var::parse(text, false), Some((var, parity)));
        }
        assert_eq!(Var::T(1, 6, 8).render(true), "[057]");
        assert_eq!(Var::parse("[1,10,11]", false), Some((Var::T(1, 10, 11), 1)));
    }
}
