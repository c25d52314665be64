//! Concrete group models: normal-form arithmetic for the abelian, free,
//! Heisenberg, lamplighter and Baumslag-Solitar groups, and a Dehn-algorithm
//! oracle for small-cancellation presentations.

use std::fmt;

use super::alphabet::{GeneratorAlphabet, Symbol, Word};
use super::presentation::{genus_two_presentation, DehnReducer, Presentation};
use super::{ElementKey, GroupModel};
use crate::error::Result;

fn letter_names(count: usize) -> Vec<String> {
    (0..count)
        .map(|i| {
            if count <= 26 {
                ((b'a' + i as u8) as char).to_string()
            } else {
                format!("x{i}")
            }
        })
        .collect()
}

fn symmetric_alphabet(count: usize) -> GeneratorAlphabet {
    let names = letter_names(count);
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    GeneratorAlphabet::symmetric(&refs, &[])
}

fn format_tuple(values: &[i64]) -> String {
    let inner: Vec<String> = values.iter().map(i64::to_string).collect();
    format!("({})", inner.join(","))
}

/// Free abelian group `Z^d` with the standard basis; keys are coordinate vectors.
#[derive(Clone, Debug)]
pub struct FreeAbelian {
    name: String,
    dim: usize,
    alphabet: GeneratorAlphabet,
}

impl FreeAbelian {
    pub fn new(dim: usize) -> Self {
        FreeAbelian {
            name: format!("zd:{dim}"),
            dim,
            alphabet: symmetric_alphabet(dim),
        }
    }
}

impl GroupModel for FreeAbelian {
    fn name(&self) -> &str {
        &self.name
    }
    fn alphabet(&self) -> &GeneratorAlphabet {
        &self.alphabet
    }
    fn identity(&self) -> ElementKey {
        ElementKey(vec![0; self.dim])
    }
    fn multiply(&self, key: &ElementKey, g: Symbol) -> ElementKey {
        let mut v = key.0.clone();
        v[g / 2] += if g % 2 == 0 { 1 } else { -1 };
        ElementKey(v)
    }
    fn relator_bound(&self) -> Option<usize> {
        // commutators [x_i, x_j]
        (self.dim >= 2).then_some(4)
    }
    fn virtually_free(&self) -> bool {
        self.dim <= 1
    }
    fn one_ended(&self) -> bool {
        self.dim >= 2
    }
    fn format_key(&self, key: &ElementKey) -> String {
        format_tuple(&key.0)
    }
}

/// Free group of rank `k`; keys are freely reduced words.
#[derive(Clone, Debug)]
pub struct FreeGroup {
    name: String,
    alphabet: GeneratorAlphabet,
}

impl FreeGroup {
    pub fn new(rank: usize) -> Self {
        FreeGroup {
            name: format!("free:{rank}"),
            alphabet: symmetric_alphabet(rank),
        }
    }
}

impl GroupModel for FreeGroup {
    fn name(&self) -> &str {
        &self.name
    }
    fn alphabet(&self) -> &GeneratorAlphabet {
        &self.alphabet
    }
    fn identity(&self) -> ElementKey {
        ElementKey(Vec::new())
    }
    fn multiply(&self, key: &ElementKey, g: Symbol) -> ElementKey {
        let mut w = key.0.clone();
        if w.last() == Some(&(self.alphabet.inverse(g) as i64)) {
            w.pop();
        } else {
            w.push(g as i64);
        }
        ElementKey(w)
    }
    fn virtually_free(&self) -> bool {
        true
    }
    fn one_ended(&self) -> bool {
        false
    }
    fn cayley_graph_is_tree(&self) -> bool {
        true
    }
    fn format_key(&self, key: &ElementKey) -> String {
        self.alphabet.format_word(&key.to_word())
    }
}

/// Integer Heisenberg group. The key `(a, b, c)` stands for the matrix
/// `[[1, a, c], [0, 1, b], [0, 0, 1]]`; generators `a`, `b` are the elementary
/// off-diagonal matrices and `c` is the central one.
#[derive(Clone, Debug)]
pub struct Heisenberg {
    alphabet: GeneratorAlphabet,
}

impl Heisenberg {
    pub fn new() -> Self {
        Heisenberg {
            alphabet: GeneratorAlphabet::symmetric(&["a", "b", "c"], &[]),
        }
    }
}

impl Default for Heisenberg {
    fn default() -> Self {
        Self::new()
    }
}

impl GroupModel for Heisenberg {
    fn name(&self) -> &str {
        "heis"
    }
    fn alphabet(&self) -> &GeneratorAlphabet {
        &self.alphabet
    }
    fn identity(&self) -> ElementKey {
        ElementKey(vec![0, 0, 0])
    }
    fn multiply(&self, key: &ElementKey, g: Symbol) -> ElementKey {
        let [a, b, c] = [key.0[0], key.0[1], key.0[2]];
        ElementKey(match g {
            0 => vec![a + 1, b, c],
            1 => vec![a - 1, b, c],
            2 => vec![a, b + 1, c + a],
            3 => vec![a, b - 1, c - a],
            4 => vec![a, b, c + 1],
            5 => vec![a, b, c - 1],
            _ => unreachable!("heisenberg has six symbols"),
        })
    }
    fn relator_bound(&self) -> Option<usize> {
        // <a, b, c | [a, b] c^-1, [a, c], [b, c]>
        Some(5)
    }
    fn virtually_free(&self) -> bool {
        false
    }
    fn one_ended(&self) -> bool {
        true
    }
    fn format_key(&self, key: &ElementKey) -> String {
        format_tuple(&key.0)
    }
}

/// Lamplighter group `Z_2 wr Z`: generator `t` moves the cursor, the
/// involution `a` toggles the lamp under it. Key layout: `[cursor, lit...]`
/// with lit positions sorted.
#[derive(Clone, Debug)]
pub struct Lamplighter {
    alphabet: GeneratorAlphabet,
}

impl Lamplighter {
    pub fn new() -> Self {
        Lamplighter {
            alphabet: GeneratorAlphabet::symmetric(&["t", "a"], &["a"]),
        }
    }
}

impl Default for Lamplighter {
    fn default() -> Self {
        Self::new()
    }
}

impl GroupModel for Lamplighter {
    fn name(&self) -> &str {
        "lamplighter"
    }
    fn alphabet(&self) -> &GeneratorAlphabet {
        &self.alphabet
    }
    fn identity(&self) -> ElementKey {
        ElementKey(vec![0])
    }
    fn multiply(&self, key: &ElementKey, g: Symbol) -> ElementKey {
        let mut v = key.0.clone();
        match g {
            0 => v[0] += 1,
            1 => v[0] -= 1,
            2 => {
                let cursor = v[0];
                match v[1..].binary_search(&cursor) {
                    Ok(i) => {
                        v.remove(i + 1);
                    }
                    Err(i) => v.insert(i + 1, cursor),
                }
            }
            _ => unreachable!("lamplighter has three symbols"),
        }
        ElementKey(v)
    }
    fn virtually_free(&self) -> bool {
        false
    }
    fn one_ended(&self) -> bool {
        true
    }
    fn format_key(&self, key: &ElementKey) -> String {
        format!("cursor={} lit={}", key.0[0], format_tuple(&key.0[1..]))
    }
}

/// Baumslag-Solitar group `BS(1, n) = <a, t | t a t^-1 = a^n>` realised as
/// affine maps `z -> n^k z + x` with `x = p / n^e`. Key layout `[k, e, p_hi, p_lo]`
/// with `e` minimal.
#[derive(Clone, Debug)]
pub struct BaumslagSolitar {
    name: String,
    n: i128,
    alphabet: GeneratorAlphabet,
}

impl BaumslagSolitar {
    pub fn new(n: u32) -> Self {
        assert!(n >= 2, "BS(1, n) needs n >= 2");
        BaumslagSolitar {
            name: format!("bs:1:{n}"),
            n: n as i128,
            alphabet: GeneratorAlphabet::symmetric(&["a", "t"], &[]),
        }
    }

    fn decode(key: &ElementKey) -> (i64, u32, i128) {
        let p = ((key.0[2] as i128) << 64) | (key.0[3] as u64 as i128);
        (key.0[0], key.0[1] as u32, p)
    }

    fn encode(&self, k: i64, mut e: u32, mut p: i128) -> ElementKey {
        while e > 0 && p % self.n == 0 {
            p /= self.n;
            e -= 1;
        }
        ElementKey(vec![k, e as i64, (p >> 64) as i64, p as i64])
    }

    fn pow(&self, e: u32) -> i128 {
        self.n.checked_pow(e).expect("BS(1,n) coordinate overflow")
    }

    /// `x + sign * n^k` with `x = p / n^e`.
    fn shift(&self, k: i64, e: u32, p: i128, sign: i128) -> ElementKey {
        if k >= 0 {
            let step = self.pow(k as u32) * self.pow(e);
            self.encode(k, e, p + sign * step)
        } else {
            let denom = e.max((-k) as u32);
            let scaled = p * self.pow(denom - e);
            let step = self.pow(denom - (-k) as u32);
            self.encode(k, denom, scaled + sign * step)
        }
    }
}

impl GroupModel for BaumslagSolitar {
    fn name(&self) -> &str {
        &self.name
    }
    fn alphabet(&self) -> &GeneratorAlphabet {
        &self.alphabet
    }
    fn identity(&self) -> ElementKey {
        ElementKey(vec![0, 0, 0, 0])
    }
    fn multiply(&self, key: &ElementKey, g: Symbol) -> ElementKey {
        let (k, e, p) = Self::decode(key);
        match g {
            0 => self.shift(k, e, p, 1),
            1 => self.shift(k, e, p, -1),
            2 => self.encode(k + 1, e, p),
            3 => self.encode(k - 1, e, p),
            _ => unreachable!("BS(1,n) has four symbols"),
        }
    }
    fn relator_bound(&self) -> Option<usize> {
        Some(self.n as usize + 3)
    }
    fn virtually_free(&self) -> bool {
        false
    }
    fn one_ended(&self) -> bool {
        true
    }
    fn format_key(&self, key: &ElementKey) -> String {
        let (k, e, p) = Self::decode(key);
        format!("t^{k} x={p}/{}^{e}", self.n)
    }
}

/// Homomorphism to a free group given by images of the positive generators
/// (one image word per alphabet symbol, inverses included). Images of equal
/// elements coincide, so the reduced image is a bucketing invariant.
#[derive(Clone, Debug)]
struct FreeImage {
    target: GeneratorAlphabet,
    images: Vec<Word>,
}

impl FreeImage {
    fn apply(&self, word: &[Symbol]) -> Word {
        let mut out = Vec::new();
        for &s in word {
            out.extend_from_slice(&self.images[s]);
        }
        self.target.free_reduce(&out)
    }
}

/// Group given by a C'(1/6) presentation; keys are Dehn-reduced words and
/// equality is decided by Dehn's algorithm.
pub struct DehnGroup {
    name: String,
    reducer: DehnReducer,
    images: Vec<FreeImage>,
    /// generators whose exponent sum vanishes in every relator
    exponent_invariant: Vec<bool>,
    one_ended: bool,
}

impl fmt::Debug for DehnGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DehnGroup")
            .field("name", &self.name)
            .field("presentation", self.reducer.presentation())
            .finish()
    }
}

impl DehnGroup {
    pub fn new(name: impl Into<String>, presentation: Presentation) -> Result<Self> {
        let alphabet = presentation.alphabet.clone();
        let generators = alphabet.len();
        let mut exponent_invariant = vec![true; generators];
        for r in &presentation.relators {
            let mut sums = vec![0i64; generators];
            for &s in r {
                let inv = alphabet.inverse(s);
                let base = s.min(inv);
                sums[base] += if s == base { 1 } else { -1 };
            }
            for (g, &sum) in sums.iter().enumerate() {
                if sum != 0 {
                    exponent_invariant[g] = false;
                }
            }
        }
        Ok(DehnGroup {
            name: name.into(),
            reducer: DehnReducer::new(presentation)?,
            images: Vec::new(),
            exponent_invariant,
            // one relator, no proper free factor: true for surface groups
            one_ended: false,
        })
    }

    /// The genus-two surface group with free-group retractions as bucketing
    /// invariants.
    pub fn genus_two() -> Self {
        let mut group = DehnGroup::new("surface:2", genus_two_presentation())
            .expect("surface presentation is C'(1/6)");
        group.one_ended = true;
        let target = GeneratorAlphabet::symmetric(&["x", "y"], &[]);
        // (x, y, x-, y-) = symbols (0, 2, 1, 3); images for a, b, c, d
        let maps: [[&str; 4]; 5] = [
            ["x", "", "y", ""],
            ["", "x", "", "y"],
            ["x", "y", "y", "x"],
            ["x", "", "", "y"],
            ["", "x", "y", ""],
        ];
        for m in maps {
            let mut images = Vec::new();
            for img in m {
                let w = target.parse_word(img).expect("static image");
                images.push(w.clone());
                images.push(target.invert_word(&w));
            }
            let hom = FreeImage {
                target: target.clone(),
                images,
            };
            for r in &group.reducer.presentation().relators {
                debug_assert!(hom.apply(r).is_empty(), "image must kill the relator");
            }
            group.images.push(hom);
        }
        group
    }

    pub fn reducer(&self) -> &DehnReducer {
        &self.reducer
    }

    pub fn normalize(&self, word: &[Symbol]) -> Word {
        self.reducer.normalize(word)
    }
}

impl GroupModel for DehnGroup {
    fn name(&self) -> &str {
        &self.name
    }
    fn alphabet(&self) -> &GeneratorAlphabet {
        self.reducer.alphabet()
    }
    fn identity(&self) -> ElementKey {
        ElementKey(Vec::new())
    }
    fn multiply(&self, key: &ElementKey, g: Symbol) -> ElementKey {
        let mut w = key.to_word();
        w.push(g);
        ElementKey::from_word(&self.reducer.normalize(&w))
    }
    fn relator_bound(&self) -> Option<usize> {
        Some(self.reducer.presentation().max_relator_length())
    }
    fn presentation(&self) -> Option<&Presentation> {
        Some(self.reducer.presentation())
    }
    fn virtually_free(&self) -> bool {
        self.reducer.presentation().relators.is_empty()
    }
    fn cayley_graph_is_tree(&self) -> bool {
        self.reducer.presentation().relators.is_empty()
    }
    fn one_ended(&self) -> bool {
        self.one_ended
    }
    fn keys_are_canonical(&self) -> bool {
        false
    }
    fn same_element(&self, a: &ElementKey, b: &ElementKey) -> bool {
        a == b || self.reducer.equal(&a.to_word(), &b.to_word())
    }
    fn invariant(&self, key: &ElementKey) -> ElementKey {
        let alphabet = self.alphabet();
        let word = key.to_word();
        let mut out = Vec::new();
        let mut sums = vec![0i64; alphabet.len()];
        for &s in &word {
            let base = s.min(alphabet.inverse(s));
            sums[base] += if s == base { 1 } else { -1 };
        }
        for (g, &ok) in self.exponent_invariant.iter().enumerate() {
            if ok && alphabet.inverse(g) >= g {
                out.push(sums[g]);
            }
        }
        for hom in &self.images {
            out.push(-1);
            out.extend(hom.apply(&word).into_iter().map(|s| s as i64));
        }
        ElementKey(out)
    }
    fn format_key(&self, key: &ElementKey) -> String {
        self.alphabet().format_word(&key.to_word())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn apply(m: &dyn GroupModel, word: &str) -> ElementKey {
        let w = m.alphabet().parse_word(word).unwrap();
        w.iter().fold(m.identity(), |k, &g| m.multiply(&k, g))
    }

    /// 3x3 upper unitriangular integer matrices, the hand oracle for `heis`.
    fn matrix_of(word: &[Symbol]) -> [[i64; 3]; 3] {
        let mul = |x: [[i64; 3]; 3], y: [[i64; 3]; 3]| {
            let mut z = [[0; 3]; 3];
            for i in 0..3 {
                for j in 0..3 {
                    z[i][j] = (0..3).map(|k| x[i][k] * y[k][j]).sum();
                }
            }
            z
        };
        let gen = |s: Symbol| {
            let mut m = [[1, 0, 0], [0, 1, 0], [0, 0, 1]];
            let sign = if s % 2 == 0 { 1 } else { -1 };
            match s / 2 {
                0 => m[0][1] = sign,
                1 => m[1][2] = sign,
                _ => m[0][2] = sign,
            }
            m
        };
        word.iter()
            .fold([[1, 0, 0], [0, 1, 0], [0, 0, 1]], |acc, &s| mul(acc, gen(s)))
    }

    #[test]
    fn zd_generator_action() {
        let z2 = FreeAbelian::new(2);
        assert_eq!(z2.multiply(&z2.identity(), 0), ElementKey(vec![1, 0]));
    }

    #[test]
    fn free_reduction_in_multiply() {
        let f2 = FreeGroup::new(2);
        let b_inv = f2.alphabet().lookup("b-").unwrap();
        assert_eq!(f2.multiply(&apply(&f2, "a b"), b_inv), apply(&f2, "a"));
    }

    #[test]
    fn heisenberg_commutator_is_central() {
        let h = Heisenberg::new();
        let key = apply(&h, "a b a- b-");
        assert_ne!(key, h.identity());
        let word = h.alphabet().parse_word("a b a- b-").unwrap();
        let m = matrix_of(&word);
        assert_eq!(m, [[1, 0, 1], [0, 1, 0], [0, 0, 1]]);
        assert_eq!(key, apply(&h, "c"));
    }

    #[test]
    fn heisenberg_matches_matrix_model() {
        let h = Heisenberg::new();
        for text in ["a b b a- c", "b a c- b- b- a a", "c c a b a- b-"] {
            let word = h.alphabet().parse_word(text).unwrap();
            let m = matrix_of(&word);
            assert_eq!(apply(&h, text).0, vec![m[0][1], m[1][2], m[0][2]]);
        }
    }

    #[test]
    fn lamplighter_toggles() {
        let l = Lamplighter::new();
        assert_eq!(apply(&l, "a t a t- a"), apply(&l, "t a t-"));
        assert_eq!(apply(&l, "a a"), l.identity());
    }

    #[test]
    fn baumslag_solitar_relation() {
        let bs = BaumslagSolitar::new(2);
        assert_eq!(apply(&bs, "t a t-"), apply(&bs, "a a"));
        assert_eq!(apply(&bs, "t- a t t- a t"), apply(&bs, "a"));
        assert_ne!(apply(&bs, "t- a t"), apply(&bs, "a"));
        let x = apply(&bs, "t- t- a t a");
        assert!(bs.format_key(&x).contains("x="));
    }

    #[test]
    fn surface_relator_is_trivial() {
        let s = DehnGroup::genus_two();
        let k = apply(&s, "a b a- b- c d c-");
        let d = s.alphabet().lookup("d-").unwrap();
        assert_eq!(s.multiply(&k, d), s.identity());
    }

    #[test]
    fn surface_invariant_agrees_on_equal_elements() {
        let s = DehnGroup::genus_two();
        let u = apply(&s, "a b a- b-");
        let v = apply(&s, "d c d- c-");
        assert!(s.same_element(&u, &v));
        assert_eq!(s.invariant(&u), s.invariant(&v));
    }
}
