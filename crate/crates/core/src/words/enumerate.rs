//! Canonical-label depth-first enumeration of word and sentence classes.
//!
//! Vertices are labeled 1, 2, … in order of first appearance, so every class is generated
//! exactly once: the first word starts at the tuple (1, …, d), later initial tuples pick seen
//! labels or the next fresh one, and every step either reuses a seen label or takes the next
//! fresh one. Vertex sets are u64 bitmasks (bit v for label v), which caps labels at 63.

use serde::Serialize;

use super::{pair_tag, ClassTag, OrderedSimplex, Sentence, Word};
use crate::complex::Simplex;
use crate::error::{Error, Result};

/// Default cap on visited search states.
pub const DEFAULT_BUDGET: u64 = 100_000_000;

const MAX_WORDS: usize = 4;

/// One enumerated class, as bitmasks.
#[derive(Clone, Debug, Default)]
pub struct RawSentence {
    pub d: usize,
    pub inits: Vec<Vec<u32>>,
    /// For each word, σ_2, …, σ_{k+1} as vertex masks.
    pub steps: Vec<Vec<u64>>,
    /// |Supp_0|.
    pub s: usize,
    /// |Supp_d|.
    pub supp_d: usize,
}

impl RawSentence {
    pub fn to_sentence(&self) -> Sentence {
        let words = self
            .inits
            .iter()
            .zip(&self.steps)
            .map(|(init, steps)| Word {
                init: OrderedSimplex(init.clone()),
                rest: steps.iter().map(|&m| Simplex::from_mask(m)).collect(),
            })
            .collect();
        Sentence { words }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Enumerator {
    pub budget: u64,
}

impl Default for Enumerator {
    fn default() -> Self {
        Enumerator { budget: DEFAULT_BUDGET }
    }
}

/// Class counts of W^{(2)}_{k,l,s} at the top vertex count s = (k+l)/2 + d − 1.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct PairCounts {
    pub s: usize,
    pub minus: u64,
    pub plus: u64,
    pub subleading: u64,
}

impl Enumerator {
    pub fn with_budget(budget: u64) -> Self {
        Enumerator { budget }
    }

    /// Calls `visitor` once per class of sentences of closed words with `ks[j]` steps each,
    /// N_a(τ) ≥ 2 everywhere, |Supp_0| = s, and (for two or more words) every word's
    /// d-support meeting another word's. Returns the number of visited states.
    pub fn visit(&self, d: usize, ks: &[usize], s: usize, visitor: &mut dyn FnMut(&RawSentence)) -> Result<u64> {
        if d == 0 {
            return Err(Error::invalid("d must be at least 1"));
        }
        if ks.is_empty() || ks.len() > MAX_WORDS {
            return Err(Error::invalid(format!("between 1 and {MAX_WORDS} words are supported")));
        }
        if ks.contains(&0) {
            return Err(Error::invalid("every word needs at least one step"));
        }
        if s > 63 {
            return Err(Error::invalid("vertex supports above 63 are not supported"));
        }
        if s < d {
            return Ok(0);
        }
        let mut search = Search {
            d,
            ks: ks.to_vec(),
            s,
            budget: self.budget,
            visited: 0,
            nseen: 0,
            taus: Vec::new(),
            deficit: 0,
            remaining: ks.iter().sum(),
            raw: RawSentence {
                d,
                inits: Vec::new(),
                steps: vec![Vec::new(); ks.len()],
                s: 0,
                supp_d: 0,
            },
            visitor,
        };
        search.start_word(0)?;
        Ok(search.visited)
    }

    pub fn words(&self, d: usize, k: usize, s: usize) -> Result<Vec<Word>> {
        check_len(k)?;
        let mut out = Vec::new();
        self.visit(d, &[k], s, &mut |r| out.push(r.to_sentence().words.remove(0)))?;
        Ok(out)
    }

    pub fn pairs(&self, d: usize, k: usize, l: usize, s: usize) -> Result<Vec<Sentence>> {
        check_len(k)?;
        check_len(l)?;
        self.sentences(d, &[k, l], s)
    }

    pub fn sentences(&self, d: usize, ks: &[usize], s: usize) -> Result<Vec<Sentence>> {
        let mut out = Vec::new();
        self.visit(d, ks, s, &mut |r| out.push(r.to_sentence()))?;
        Ok(out)
    }

    /// Counts minus, plus and remaining classes at the top vertex count without materializing them.
    pub fn pair_counts(&self, d: usize, k: usize, l: usize) -> Result<PairCounts> {
        check_len(k)?;
        check_len(l)?;
        let mut c = PairCounts::default();
        if (k + l) % 2 == 1 {
            return Ok(c);
        }
        c.s = (k + l) / 2 + d - 1;
        self.visit(d, &[k, l], c.s, &mut |r| match pair_tag(d, k, l, r.s, r.supp_d) {
            ClassTag::Minus => c.minus += 1,
            ClassTag::Plus => c.plus += 1,
            ClassTag::Subleading => c.subleading += 1,
        })?;
        Ok(c)
    }
}

fn check_len(k: usize) -> Result<()> {
    if k < 2 {
        return Err(Error::invalid(format!("word lengths need k >= 2, got {k}")));
    }
    Ok(())
}

/// W_{k,s}: classes of closed words of length k+1.
pub fn enumerate_words(d: usize, k: usize, s: usize) -> Result<Vec<Word>> {
    Enumerator::default().words(d, k, s)
}

/// W^{(2)}_{k,l,s}.
pub fn enumerate_pair_sentences(d: usize, k: usize, l: usize, s: usize) -> Result<Vec<Sentence>> {
    Enumerator::default().pairs(d, k, l, s)
}

/// W^{(h)}_{ks,s} for h = ks.len() ≤ 4.
pub fn enumerate_h_sentences(d: usize, ks: &[usize], s: usize) -> Result<Vec<Sentence>> {
    Enumerator::default().sentences(d, ks, s)
}

pub fn count_pair_classes(d: usize, k: usize, l: usize) -> Result<PairCounts> {
    Enumerator::default().pair_counts(d, k, l)
}

struct Tau {
    mask: u64,
    count: u32,
    words: u32,
}

struct Search<'v> {
    d: usize,
    ks: Vec<usize>,
    s: usize,
    budget: u64,
    visited: u64,
    /// Labels 1..=nseen are in use.
    nseen: usize,
    taus: Vec<Tau>,
    /// Number of τ with N = 1.
    deficit: usize,
    /// Steps left over all words.
    remaining: usize,
    raw: RawSentence,
    visitor: &'v mut dyn FnMut(&RawSentence),
}

impl Search<'_> {
    /// Necessary conditions for completing the current prefix.
    fn feasible(&self, future_words: usize) -> bool {
        if self.nseen > self.s || self.deficit > self.remaining {
            return false;
        }
        // Each fresh vertex from a step opens a new τ that a later, non-fresh step must revisit.
        let max_fresh = (self.remaining - self.deficit) / 2;
        self.nseen + max_fresh + self.d * future_words >= self.s
    }

    fn connected(&self) -> bool {
        let h = self.ks.len();
        h == 1
            || (0..h).all(|j| {
                self.taus
                    .iter()
                    .any(|t| t.words >> j & 1 == 1 && t.words & !(1 << j) != 0)
            })
    }

    fn start_word(&mut self, j: usize) -> Result<()> {
        let h = self.ks.len();
        if j == h {
            if self.deficit == 0 && self.nseen == self.s && self.connected() {
                self.raw.s = self.nseen;
                self.raw.supp_d = self.taus.len();
                (self.visitor)(&self.raw);
            }
            return Ok(());
        }
        if j == 0 {
            let init: Vec<u32> = (1..=self.d as u32).collect();
            self.nseen = self.d;
            if self.feasible(h - 1) {
                self.begin(j, init)?;
            }
            self.nseen = 0;
            return Ok(());
        }
        self.choose_init(j, &mut Vec::with_capacity(self.d))
    }

    fn choose_init(&mut self, j: usize, tuple: &mut Vec<u32>) -> Result<()> {
        if tuple.len() == self.d {
            if self.feasible(self.ks.len() - j - 1) {
                self.begin(j, tuple.clone())?;
            }
            return Ok(());
        }
        for v in 1..=self.nseen as u32 {
            if tuple.contains(&v) {
                continue;
            }
            tuple.push(v);
            self.choose_init(j, tuple)?;
            tuple.pop();
        }
        if self.nseen < self.s {
            self.nseen += 1;
            tuple.push(self.nseen as u32);
            self.choose_init(j, tuple)?;
            tuple.pop();
            self.nseen -= 1;
        }
        Ok(())
    }

    fn begin(&mut self, j: usize, init: Vec<u32>) -> Result<()> {
        let mask = init.iter().fold(0u64, |m, &v| m | 1 << v);
        self.raw.inits.push(init);
        let r = self.walk(j, 0, mask, mask);
        self.raw.inits.pop();
        r
    }

    fn walk(&mut self, j: usize, i: usize, start: u64, cur: u64) -> Result<()> {
        self.visited += 1;
        if self.visited > self.budget {
            return Err(Error::BudgetExceeded { budget: self.budget });
        }
        if i == self.ks[j] {
            debug_assert_eq!(cur, start);
            return self.start_word(j + 1);
        }
        let left_after = (self.ks[j] - i - 1) as u32;
        let future = self.ks.len() - j - 1;
        let mut drops = cur;
        while drops != 0 {
            let drop = drops.trailing_zeros();
            drops &= drops - 1;
            let base = cur & !(1u64 << drop);
            let top = if self.nseen < self.s { self.nseen + 1 } else { self.nseen };
            for v in 1..=top as u32 {
                let bit = 1u64 << v;
                if cur & bit != 0 {
                    continue;
                }
                let next = base | bit;
                if (next & !start).count_ones() > left_after {
                    continue;
                }
                let fresh = v as usize == self.nseen + 1;
                let tau = cur | bit;
                let slot = self.taus.iter().position(|t| t.mask == tau);
                let prev_words = match slot {
                    Some(idx) => {
                        let t = &mut self.taus[idx];
                        t.count += 1;
                        if t.count == 2 {
                            self.deficit -= 1;
                        }
                        let w = t.words;
                        t.words |= 1 << j;
                        w
                    }
                    None => {
                        self.taus.push(Tau {
                            mask: tau,
                            count: 1,
                            words: 1 << j,
                        });
                        self.deficit += 1;
                        0
                    }
                };
                if fresh {
                    self.nseen += 1;
                }
                self.remaining -= 1;

                let result = if self.feasible(future) {
                    self.raw.steps[j].push(next);
                    let r = self.walk(j, i + 1, start, next);
                    self.raw.steps[j].pop();
                    r
                } else {
                    Ok(())
                };

                self.remaining += 1;
                if fresh {
                    self.nseen -= 1;
                }
                match slot {
                    Some(idx) => {
                        let t = &mut self.taus[idx];
                        if t.count == 2 {
                            self.deficit += 1;
                        }
                        t.count -= 1;
                        t.words = prev_words;
                    }
                    None => {
                        self.taus.pop();
                        self.deficit -= 1;
                    }
                }
                result?;
            }
        }
        Ok(())
    }
}
