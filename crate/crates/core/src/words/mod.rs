//! (n,d)-words and sentences: walks over (d−1)-simplices whose consecutive entries span a
//! d-simplex, their supports, signs, canonical forms, and exact enumeration of classes.

mod enumerate;
mod poly;

pub use enumerate::{
    count_pair_classes, enumerate_h_sentences, enumerate_pair_sentences, enumerate_words, Enumerator, PairCounts,
    RawSentence, DEFAULT_BUDGET,
};
pub use poly::{parse_rational, PolyP};

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::complex::{classify_bracelet, is_d_tree, sign_adjacent, PureComplex, Simplex, Vertex};
use crate::error::{Error, Result};

/// A tuple of distinct vertices; the order matters.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct OrderedSimplex(Vec<Vertex>);

impl OrderedSimplex {
    pub fn new(vertices: Vec<Vertex>) -> Result<Self> {
        let set: BTreeSet<_> = vertices.iter().collect();
        if set.len() != vertices.len() || vertices.contains(&0) {
            return Err(Error::InvalidWord(format!("{vertices:?} is not a tuple of distinct positive labels")));
        }
        Ok(OrderedSimplex(vertices))
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.0
    }

    pub fn unordered(&self) -> Simplex {
        Simplex::new(self.0.clone()).expect("distinct vertices")
    }
}

/// w = σ̃_1 σ_2 ⋯ σ_k: an ordered initial (d−1)-simplex followed by unordered ones.
///
/// The length k counts all simplices including the first, so a word of length k has k − 1 steps.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    pub init: OrderedSimplex,
    pub rest: Vec<Simplex>,
}

impl Word {
    pub fn new(init: Vec<Vertex>, rest: Vec<Vec<Vertex>>) -> Result<Self> {
        let init = OrderedSimplex::new(init)?;
        let rest = rest.into_iter().map(Simplex::new).collect::<Result<Vec<_>>>()?;
        let w = Word { init, rest };
        w.validate()?;
        Ok(w)
    }

    pub fn d(&self) -> usize {
        self.init.0.len()
    }

    pub fn len(&self) -> usize {
        1 + self.rest.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn steps(&self) -> usize {
        self.rest.len()
    }

    /// σ_1, σ_2, …, σ_k as unordered simplices.
    pub fn simplices(&self) -> impl Iterator<Item = Simplex> + '_ {
        std::iter::once(self.init.unordered()).chain(self.rest.iter().cloned())
    }

    pub fn is_closed(&self) -> bool {
        self.rest.last().is_none_or(|last| *last == self.init.unordered())
    }

    /// Checks that every σ_i has d vertices and consecutive simplices span a d-simplex.
    pub fn validate(&self) -> Result<()> {
        let d = self.d();
        if d == 0 {
            return Err(Error::InvalidWord("empty initial simplex".into()));
        }
        let simplices: Vec<Simplex> = self.simplices().collect();
        for (i, pair) in simplices.windows(2).enumerate() {
            if pair[1].len() != d {
                return Err(Error::InvalidWord(format!("simplex {} has the wrong size", i + 2)));
            }
            if pair[0].union(&pair[1]).len() != d + 1 {
                return Err(Error::InvalidWord(format!(
                    "{} and {} do not span a {d}-simplex",
                    pair[0], pair[1]
                )));
            }
        }
        Ok(())
    }

    /// Applies a vertex relabeling; the initial tuple keeps its order.
    pub fn relabel(&self, f: impl Fn(Vertex) -> Vertex) -> Result<Word> {
        let init = OrderedSimplex::new(self.init.0.iter().map(|&v| f(v)).collect())?;
        let rest = self.rest.iter().map(|s| s.map(&f)).collect::<Result<Vec<_>>>()?;
        Ok(Word { init, rest })
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let init: Vec<String> = self.init.0.iter().map(|v| v.to_string()).collect();
        write!(f, "({})", init.join(","))?;
        for s in &self.rest {
            write!(f, " {s}")?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = Error;

    /// Parses `(1,2) {1,3} {1,2}`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = |m: &str| Error::InvalidWord(format!("{m} in {s:?}"));
        let s = s.trim();
        let body = s.strip_prefix('(').ok_or_else(|| bad("missing `(`"))?;
        let (init, rest) = body.split_once(')').ok_or_else(|| bad("missing `)`"))?;
        let list = |t: &str| -> Result<Vec<Vertex>> {
            t.split(',')
                .map(|x| x.trim().parse::<Vertex>().map_err(|_| bad("bad vertex")))
                .collect()
        };
        let init = list(init)?;
        let mut simplices = Vec::new();
        let mut rest = rest.trim();
        while !rest.is_empty() {
            let inner = rest.strip_prefix('{').ok_or_else(|| bad("expected `{`"))?;
            let (group, tail) = inner.split_once('}').ok_or_else(|| bad("missing `}`"))?;
            simplices.push(list(group)?);
            rest = tail.trim_start();
        }
        Word::new(init, simplices)
    }
}

/// A tuple of words.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Sentence {
    pub words: Vec<Word>,
}

impl Sentence {
    pub fn new(words: Vec<Word>) -> Result<Self> {
        if words.is_empty() {
            return Err(Error::InvalidWord("a sentence needs at least one word".into()));
        }
        let d = words[0].d();
        if words.iter().any(|w| w.d() != d) {
            return Err(Error::InvalidWord("words of different dimensions".into()));
        }
        Ok(Sentence { words })
    }

    pub fn d(&self) -> usize {
        self.words[0].d()
    }

    pub fn h(&self) -> usize {
        self.words.len()
    }

    /// Step counts of the words.
    pub fn steps(&self) -> Vec<usize> {
        self.words.iter().map(Word::steps).collect()
    }
}

impl fmt::Display for Sentence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, w) in self.words.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{w}")?;
        }
        Ok(())
    }
}

impl FromStr for Sentence {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let words = s
            .lines()
            .filter(|l| !l.trim().is_empty())
            .map(str::parse)
            .collect::<Result<Vec<Word>>>()?;
        Sentence::new(words)
    }
}

/// Supports, traversal counts and signs of a word.
#[derive(Clone, Debug)]
pub struct WordSummary {
    pub supp0: BTreeSet<Vertex>,
    pub supp_d: BTreeSet<Simplex>,
    pub complex: PureComplex,
    /// N_w(τ): how many steps traverse τ.
    pub n: BTreeMap<Simplex, usize>,
    /// sgn(w, τ): product of the signs of the steps traversing τ.
    pub tau_sign: BTreeMap<Simplex, i8>,
    pub sign: i8,
    /// Induced ordering of each visited simplex, taken at its first occurrence.
    pub induced: BTreeMap<Simplex, OrderedSimplex>,
}

pub fn summarize(w: &Word) -> Result<WordSummary> {
    w.validate()?;
    let d = w.d();
    let mut supp0 = BTreeSet::new();
    let mut n: BTreeMap<Simplex, usize> = BTreeMap::new();
    let mut tau_sign: BTreeMap<Simplex, i8> = BTreeMap::new();
    let mut induced = BTreeMap::new();
    let mut sign = 1i8;
    let mut cur = w.init.clone();
    let mut prev = w.init.unordered();
    supp0.extend(prev.vertices().iter().copied());
    induced.insert(prev.clone(), cur.clone());
    for next in &w.rest {
        let tau = prev.union(next);
        let s = sign_adjacent(&prev, next)?;
        *n.entry(tau.clone()).or_default() += 1;
        *tau_sign.entry(tau).or_insert(1) *= s;
        sign *= s;
        // (v_0, …, v_{d−1}) → (v, v_0, …, v̂_j, …).
        let added = next.vertices().iter().copied().find(|v| !prev.contains(*v)).expect("validated");
        let mut t = Vec::with_capacity(d);
        t.push(added);
        t.extend(cur.0.iter().copied().filter(|v| next.contains(*v)));
        cur = OrderedSimplex(t);
        induced.entry(next.clone()).or_insert_with(|| cur.clone());
        supp0.extend(next.vertices().iter().copied());
        prev = next.clone();
    }
    let supp_d: BTreeSet<Simplex> = n.keys().cloned().collect();
    let complex = PureComplex::new(d, supp_d.iter().cloned())?;
    Ok(WordSummary {
        supp0,
        supp_d,
        complex,
        n,
        tau_sign,
        sign,
        induced,
    })
}

/// Aggregate supports and counts of a sentence.
#[derive(Clone, Debug)]
pub struct SentenceSummary {
    pub supp0: BTreeSet<Vertex>,
    pub supp_d: BTreeSet<Simplex>,
    pub complex: PureComplex,
    /// N_a(τ) = Σ_j N_{w^j}(τ).
    pub n: BTreeMap<Simplex, usize>,
    pub sign: i8,
    pub words: Vec<WordSummary>,
}

pub fn summarize_sentence(a: &Sentence) -> Result<SentenceSummary> {
    let words = a.words.iter().map(summarize).collect::<Result<Vec<_>>>()?;
    let mut supp0 = BTreeSet::new();
    let mut n: BTreeMap<Simplex, usize> = BTreeMap::new();
    let mut sign = 1;
    for s in &words {
        supp0.extend(s.supp0.iter().copied());
        for (tau, c) in &s.n {
            *n.entry(tau.clone()).or_default() += c;
        }
        sign *= s.sign;
    }
    let supp_d: BTreeSet<Simplex> = n.keys().cloned().collect();
    let complex = PureComplex::new(a.d(), supp_d.iter().cloned())?;
    Ok(SentenceSummary {
        supp0,
        supp_d,
        complex,
        n,
        sign,
        words,
    })
}

/// Relabels by first appearance: each word's initial tuple contributes its unseen vertices in
/// tuple order, then every step contributes its new vertex when first seen.
pub fn canonical_form(a: &Sentence) -> Sentence {
    let mut map: HashMap<Vertex, Vertex> = HashMap::new();
    let see = |v: Vertex, map: &mut HashMap<Vertex, Vertex>| {
        let next = map.len() as Vertex + 1;
        map.entry(v).or_insert(next);
    };
    for w in &a.words {
        for &v in &w.init.0 {
            see(v, &mut map);
        }
        for s in &w.rest {
            for &v in s.vertices() {
                see(v, &mut map);
            }
        }
    }
    Sentence {
        words: a
            .words
            .iter()
            .map(|w| w.relabel(|v| map[&v]).expect("bijective relabeling"))
            .collect(),
    }
}

pub fn canonical_word(w: &Word) -> Word {
    canonical_form(&Sentence { words: vec![w.clone()] }).words.remove(0)
}

/// T̄(w) = sgn(w)·Π_τ E[(χ_p − p)^{N_w(τ)}].
pub fn tbar_word(w: &Word) -> Result<PolyP> {
    if !w.is_closed() {
        return Err(Error::InvalidWord(format!("{w} is not closed")));
    }
    let s = summarize(w)?;
    Ok(signed(s.sign, product_of_moments(&s.n)))
}

/// T̄(a) = sgn(a)·[Π_τ m(N_a(τ)) − Π_τ m(N_{w¹}(τ))·Π_τ m(N_{w²}(τ))].
pub fn tbar_sentence(a: &Sentence) -> Result<PolyP> {
    if a.h() != 2 || a.words.iter().any(|w| !w.is_closed()) {
        return Err(Error::InvalidWord("T̄ of a sentence needs two closed words".into()));
    }
    let s = summarize_sentence(a)?;
    let joint = product_of_moments(&s.n);
    let separate = &product_of_moments(&s.words[0].n) * &product_of_moments(&s.words[1].n);
    Ok(signed(s.sign, &joint - &separate))
}

fn product_of_moments(n: &BTreeMap<Simplex, usize>) -> PolyP {
    let mut cache: BTreeMap<usize, PolyP> = BTreeMap::new();
    let mut out = PolyP::one();
    for &c in n.values() {
        let m = cache
            .entry(c)
            .or_insert_with(|| PolyP::centered_moment(c as u32));
        out = &out * m;
    }
    out
}

fn signed(sign: i8, p: PolyP) -> PolyP {
    if sign < 0 {
        -&p
    } else {
        p
    }
}

/// Leading-order type of a pair sentence.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ClassTag {
    Minus,
    Plus,
    Subleading,
}

impl fmt::Display for ClassTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ClassTag::Minus => "minus",
            ClassTag::Plus => "plus",
            ClassTag::Subleading => "subleading",
        })
    }
}

/// Tag from vertex and d-simplex counts alone.
pub fn pair_tag(d: usize, k: usize, l: usize, s: usize, supp_d: usize) -> ClassTag {
    if (k + l) % 2 == 1 || s != (k + l) / 2 + d - 1 {
        return ClassTag::Subleading;
    }
    if supp_d + 1 == (k + l) / 2 {
        ClassTag::Minus
    } else if supp_d == (k + l) / 2 {
        ClassTag::Plus
    } else {
        ClassTag::Subleading
    }
}

/// Classifies a pair sentence and checks the support shape that goes with its class:
/// a d-tree for minus, a bracelet with regular pendant d-trees for plus.
pub fn classify_pair(a: &Sentence, k: usize, l: usize) -> Result<ClassTag> {
    if a.h() != 2 || a.words[0].steps() != k || a.words[1].steps() != l {
        return Err(Error::InvalidWord(format!("sentence does not have word lengths {} and {}", k + 1, l + 1)));
    }
    let s = summarize_sentence(a)?;
    let tag = pair_tag(a.d(), k, l, s.supp0.len(), s.supp_d.len());
    match tag {
        ClassTag::Minus if !is_d_tree(&s.complex) => Err(Error::InvalidWord(format!(
            "minus-class support is not a d-tree:\n{a}"
        ))),
        ClassTag::Plus if !classify_bracelet(&s.complex).is_some_and(|r| r.regular) => Err(Error::InvalidWord(
            format!("plus-class support is not a bracelet with regular pendants:\n{a}"),
        )),
        t => Ok(t),
    }
}

/// Per-class summary used in enumeration dumps.
#[derive(Clone, Debug, Serialize)]
pub struct ClassSummary {
    pub supp0_size: usize,
    #[serde(rename = "suppD_size")]
    pub supp_d_size: usize,
    /// N_histogram[j] = number of d-simplices traversed exactly j times.
    #[serde(rename = "N_histogram")]
    pub n_histogram: Vec<usize>,
    pub sign: i8,
    pub class_tag: Option<ClassTag>,
    pub text: String,
}

pub fn class_summary(a: &Sentence, tag: Option<ClassTag>) -> Result<ClassSummary> {
    let s = summarize_sentence(a)?;
    let max = s.n.values().copied().max().unwrap_or(0);
    let mut hist = vec![0; max + 1];
    for &c in s.n.values() {
        hist[c] += 1;
    }
    Ok(ClassSummary {
        supp0_size: s.supp0.len(),
        supp_d_size: s.supp_d.len(),
        n_histogram: hist,
        sign: s.sign,
        class_tag: tag,
        text: a.to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn summary_of_a_back_and_forth_edge() {
        let s = summarize(&w("(1) {2} {1}")).unwrap();
        assert_eq!(s.supp0, [1, 2].into());
        assert_eq!(s.supp_d.len(), 1);
        assert_eq!(s.n.values().copied().collect::<Vec<_>>(), vec![2]);
        assert_eq!(s.sign, 1);
    }

    #[test]
    fn induced_ordering_rule() {
        let s = summarize(&w("(1,2) {1,3}")).unwrap();
        let t = Simplex::new(vec![1, 3]).unwrap();
        assert_eq!(s.induced[&t].vertices(), &[3, 1]);
        // The first occurrence fixes the induced ordering; revisits do not change it.
        let s = summarize(&w("(1,2) {2,3} {1,2}")).unwrap();
        let t12 = Simplex::new(vec![1, 2]).unwrap();
        assert_eq!(s.induced[&t12].vertices(), &[1, 2]);
    }

    #[test]
    fn hand_traced_word_around_two_triangles() {
        // {1,2} → {2,3} → {1,2} → {2,4} → {1,2}: τ = {1,2,3} twice, {1,2,4} twice.
        let word = w("(1,2) {2,3} {1,2} {2,4} {1,2}");
        let s = summarize(&word).unwrap();
        let t123 = Simplex::new(vec![1, 2, 3]).unwrap();
        let t124 = Simplex::new(vec![1, 2, 4]).unwrap();
        assert_eq!(s.n[&t123], 2);
        assert_eq!(s.n[&t124], 2);
        assert_eq!(s.n.len(), 2);
        assert_eq!(s.tau_sign[&t123], 1);
        assert_eq!(s.sign, 1);
        // Step signs: sgn({1,2},{2,3}) = −1 twice, sgn({1,2},{2,4}) = −1 twice.
        assert_eq!(sign_adjacent(&Simplex::new(vec![1, 2]).unwrap(), &Simplex::new(vec![2, 3]).unwrap()).unwrap(), -1);
        assert_eq!(s.n.values().sum::<usize>(), word.len() - 1);
    }

    #[test]
    fn invalid_words() {
        assert!("(1,2) {3,4}".parse::<Word>().is_err());
        assert!("(1,1) {1,2}".parse::<Word>().is_err());
        assert!("(1,2) {1,2,3}".parse::<Word>().is_err());
        assert!("1,2 {1,3}".parse::<Word>().is_err());
        assert!("(1,2) {1,3".parse::<Word>().is_err());
    }

    #[test]
    fn text_roundtrip() {
        for s in ["(1) {2} {1}", "(1,2) {1,3} {1,2}", "(2,1) {1,3} {3,4} {1,3} {1,2}"] {
            assert_eq!(w(s).to_string(), s);
        }
        let a: Sentence = "(1) {2} {1}\n(2) {1} {2}".parse().unwrap();
        assert_eq!(a.to_string().parse::<Sentence>().unwrap(), a);
    }

    #[test]
    fn canonical_examples() {
        assert_eq!(canonical_word(&w("(7) {9} {7}")), w("(1) {2} {1}"));
        assert_eq!(canonical_word(&w("(5,3) {3,8} {5,3}")).init.vertices(), &[1, 2]);
        let a: Sentence = "(4) {9} {4}\n(9) {6} {9}".parse().unwrap();
        assert_eq!(canonical_form(&a).to_string(), "(1) {2} {1}\n(2) {3} {2}");
        // Word 2's unseen initial vertices are labeled in tuple order.
        let b: Sentence = "(1,2) {1,3} {1,2}\n(9,1) {1,7} {9,1}".parse().unwrap();
        assert_eq!(canonical_form(&b).words[1].init.vertices(), &[4, 1]);
    }

    #[test]
    fn tbar_examples() {
        let p = PolyP::p();
        let pq = &p - &p.pow(2);
        assert_eq!(tbar_word(&w("(1) {2} {1}")).unwrap(), pq);
        assert!(tbar_word(&w("(1) {2} {3} {1}")).unwrap().is_zero());
        let four = tbar_word(&w("(1) {2} {1} {2} {1}")).unwrap();
        assert_eq!(four, PolyP::centered_moment(4));
        assert!(tbar_word(&w("(1) {2}")).is_err());

        let minus: Sentence = "(1) {2} {1}\n(1) {2} {1}".parse().unwrap();
        let want = &pq * &PolyP::linear(-1, 2).pow(2);
        assert_eq!(tbar_sentence(&minus).unwrap(), want);
        let disjoint: Sentence = "(1) {2} {1}\n(3) {4} {3}".parse().unwrap();
        assert!(tbar_sentence(&disjoint).unwrap().is_zero());
        let plus: Sentence = "(1) {2} {3} {1}\n(1) {3} {2} {1}".parse().unwrap();
        assert_eq!(tbar_sentence(&plus).unwrap(), pq.pow(3));
    }

    #[test]
    fn pair_classification_examples() {
        let minus: Sentence = "(1) {2} {1}\n(2) {1} {2}".parse().unwrap();
        assert_eq!(classify_pair(&minus, 2, 2).unwrap(), ClassTag::Minus);
        let plus: Sentence = "(1) {2} {3} {1}\n(1) {2} {3} {1}".parse().unwrap();
        assert_eq!(classify_pair(&plus, 3, 3).unwrap(), ClassTag::Plus);
        let sub: Sentence = "(1) {2} {1} {2} {1}\n(1) {2} {1}".parse().unwrap();
        assert_eq!(classify_pair(&sub, 4, 2).unwrap(), ClassTag::Subleading);
        assert!(classify_pair(&sub, 2, 2).is_err());
    }

    fn arb_closed_word() -> impl Strategy<Value = Word> {
        // A random walk that retraces itself: σ_1 … σ_m σ_{m−1} … σ_1 is always closed.
        (1usize..=3, proptest::collection::vec((0usize..8, 1u32..=9), 1..6)).prop_map(|(d, moves)| {
            let mut path: Vec<Vec<u32>> = vec![(1..=d as u32).collect()];
            for (drop, add) in moves {
                let cur = path.last().unwrap().clone();
                if cur.contains(&add) {
                    continue;
                }
                let mut next: Vec<u32> = cur.clone();
                next.remove(drop % d);
                next.push(add);
                next.sort();
                path.push(next);
            }
            let back: Vec<Vec<u32>> = path.iter().rev().skip(1).cloned().collect();
            let mut rest: Vec<Vec<u32>> = path[1..].to_vec();
            rest.extend(back);
            if rest.is_empty() {
                let mut other: Vec<u32> = (1..d as u32).collect();
                other.push(d as u32 + 1);
                rest = vec![other, (1..=d as u32).collect()];
            }
            Word::new((1..=d as u32).rev().collect(), rest).unwrap()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(500))]

        #[test]
        fn sign_invariant_under_relabeling(w in arb_closed_word(), perm in Just((1u32..=9).collect::<Vec<_>>()).prop_shuffle()) {
            let relabeled = w.relabel(|v| perm[v as usize - 1]).unwrap();
            prop_assert_eq!(summarize(&w).unwrap().sign, summarize(&relabeled).unwrap().sign);
            prop_assert_eq!(canonical_word(&w), canonical_word(&relabeled));
        }

        #[test]
        fn canonical_form_is_idempotent(w in arb_closed_word(), perm in Just((1u32..=9).collect::<Vec<_>>()).prop_shuffle()) {
            let x = w.relabel(|v| perm[v as usize - 1]).unwrap();
            let c = canonical_word(&x);
            prop_assert_eq!(canonical_word(&c), c.clone());
            let s = summarize(&x).unwrap();
            prop_assert_eq!(s.n.values().sum::<usize>(), x.len() - 1);
        }
    }
}
