//! Atomicity decided on class signatures instead of integers.
//!
//! For an odd prime `n` the signature of `x` records, for each prime factor of
//! `|x|` counted with multiplicity, its `mu_n` class label. Grouping prime
//! factors into parts corresponds to grouping labels into blocks, and a
//! block's class depends only on its labels, so atomicity is a property of
//! the signature alone.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::io::Write;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{factor, is_prime_u64};
use crate::error::{Error, Result};
use crate::relations::{ClassTable, MuClassIndex};

pub const DEFAULT_TABLE_CAP: u64 = 1_000_000;

/// Multiset of class labels: `zero_count` multiples of `n` plus
/// `unit_counts[i]` factors of unit index `i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Signature {
    q: u32,
    zero_count: u32,
    unit_counts: Vec<u32>,
}

impl Signature {
    pub fn new(q: u32, zero_count: u32, unit_counts: Vec<u32>) -> Result<Self> {
        if q == 0 || unit_counts.len() != q as usize {
            return Err(Error::InvalidArgument(format!(
                "signature needs exactly q = {q} unit counts, got {}",
                unit_counts.len()
            )));
        }
        Ok(Signature {
            q,
            zero_count,
            unit_counts,
        })
    }

    /// Signature with the given `(index, count)` pairs; repeated indices add up.
    pub fn from_counts(q: u32, zero_count: u32, counts: &[(u32, u32)]) -> Result<Self> {
        let mut unit_counts = vec![0; q as usize];
        for &(i, c) in counts {
            if i >= q {
                return Err(Error::InvalidArgument(format!("index {i} out of range for q = {q}")));
            }
            unit_counts[i as usize] += c;
        }
        Signature::new(q, zero_count, unit_counts)
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn zero_count(&self) -> u32 {
        self.zero_count
    }

    pub fn unit_counts(&self) -> &[u32] {
        &self.unit_counts
    }

    pub fn count(&self, index: u32) -> u32 {
        self.unit_counts.get(index as usize).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u32 {
        self.zero_count + self.unit_counts.iter().sum::<u32>()
    }

    /// Labels with multiplicity: zeros first, then unit indices ascending.
    pub fn elements(&self) -> Vec<MuClassIndex> {
        let mut out = vec![MuClassIndex::Zero; self.zero_count as usize];
        for (i, &c) in self.unit_counts.iter().enumerate() {
            out.extend(std::iter::repeat_n(MuClassIndex::Unit(i as u32), c as usize));
        }
        out
    }

    pub fn with_zero_count(&self, zero_count: u32) -> Signature {
        Signature {
            zero_count,
            ..self.clone()
        }
    }

    pub fn with_count(&self, index: u32, count: u32) -> Signature {
        let mut s = self.clone();
        s.unit_counts[index as usize] = count;
        s
    }

    /// Parses the `x`-notation used by [`Display`](fmt::Display):
    /// `x1^3*x2`, `z*x0`, or `1` for the empty signature.
    pub fn parse(text: &str, q: u32) -> Result<Signature> {
        let mut zero = 0;
        let mut counts = Vec::new();
        let text = text.trim();
        if text == "1" || text.is_empty() {
            return Signature::new(q, 0, vec![0; q as usize]);
        }
        let bad = || Error::InvalidArgument(format!("cannot parse signature `{text}`"));
        for term in text.split('*') {
            let term = term.trim();
            let (head, exp) = match term.split_once('^') {
                Some((h, e)) => (h, e.trim().parse::<u32>().map_err(|_| bad())?),
                None => (term, 1),
            };
            if head == "z" {
                zero += exp;
            } else if let Some(idx) = head.strip_prefix('x') {
                counts.push((idx.parse::<u32>().map_err(|_| bad())?, exp));
            } else {
                return Err(bad());
            }
        }
        Signature::from_counts(q, zero, &counts)
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        let mut push = |name: String, c: u32| match c {
            0 => {}
            1 => terms.push(name),
            _ => terms.push(format!("{name}^{c}")),
        };
        push("z".to_string(), self.zero_count);
        for (i, &c) in self.unit_counts.iter().enumerate() {
            push(format!("x{i}"), c);
        }
        if terms.is_empty() {
            f.write_str("1")
        } else {
            f.write_str(&terms.join("*"))
        }
    }
}

impl FromStr for MuClassIndex {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "z" => Ok(MuClassIndex::Zero),
            _ => s
                .strip_prefix('x')
                .and_then(|i| i.parse().ok())
                .map(MuClassIndex::Unit)
                .ok_or_else(|| Error::InvalidArgument(format!("bad class label `{s}`"))),
        }
    }
}

/// Class labels of the prime factors of `|x|`.
pub fn signature_of(x: i64, table: &ClassTable) -> Result<Signature> {
    let f = factor(x)?;
    if f.is_unit() {
        return Err(Error::UnitInput(x));
    }
    let q = table.q();
    let mut zero = 0;
    let mut counts = vec![0u32; q as usize];
    for &(p, e) in f.factors() {
        match table.index_of_u64(p) {
            MuClassIndex::Zero => zero += e,
            MuClassIndex::Unit(i) => counts[i as usize] += e,
        }
    }
    Signature::new(q, zero, counts)
}

/// Class of a product of labels: `Zero` if any factor is, else the index sum mod `q`.
pub fn block_class(block: &[MuClassIndex], q: u32) -> MuClassIndex {
    block.iter().fold(MuClassIndex::Unit(0), |acc, &i| {
        crate::relations::index_add_q(acc, i, q)
    })
}

pub type Block = Vec<MuClassIndex>;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Verdict {
    /// Empty signature, i.e. `±1`.
    Unit,
    Atom,
    /// Witness: two or more blocks sharing one block class.
    Reducible(Vec<Block>),
}

impl Verdict {
    pub fn is_atom(&self) -> bool {
        matches!(self, Verdict::Atom)
    }

    pub fn is_reducible(&self) -> bool {
        matches!(self, Verdict::Reducible(_))
    }

    pub fn label(&self) -> &'static str {
        match self {
            Verdict::Unit => "unit",
            Verdict::Atom => "atom",
            Verdict::Reducible(_) => "reducible",
        }
    }

    pub fn witness(&self) -> Option<&[Block]> {
        match self {
            Verdict::Reducible(w) => Some(w),
            _ => None,
        }
    }
}

/// Witness in the text form `x1*x4|x4`: blocks separated by `|`.
pub fn format_witness(blocks: &[Block]) -> String {
    blocks
        .iter()
        .map(|b| b.iter().map(|i| i.to_string()).collect::<Vec<_>>().join("*"))
        .collect::<Vec<_>>()
        .join("|")
}

/// True iff `blocks` regroups exactly the labels of `s` into at least two
/// nonempty blocks that all have the same class.
pub fn validate_witness(s: &Signature, blocks: &[Block]) -> bool {
    if blocks.len() < 2 || blocks.iter().any(|b| b.is_empty()) {
        return false;
    }
    let mut labels: Vec<MuClassIndex> = blocks.iter().flatten().copied().collect();
    labels.sort();
    if labels != s.elements() {
        return false;
    }
    let first = block_class(&blocks[0], s.q());
    blocks.iter().all(|b| block_class(b, s.q()) == first)
}

/// Memoized search for partitions of unit-label multisets into equal-class blocks.
///
/// The memo is keyed by `(remaining counts, required class)` and holds the
/// block chosen for the smallest remaining label, so it can be shared across
/// many signatures with the same `q`.
pub struct SignatureSolver {
    q: u32,
    memo: HashMap<(Vec<u32>, u32), Option<Vec<u32>>>,
}

impl SignatureSolver {
    pub fn new(q: u32) -> Self {
        SignatureSolver {
            q,
            memo: HashMap::new(),
        }
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn decide(&mut self, s: &Signature) -> Verdict {
        assert_eq!(s.q(), self.q, "signature and solver disagree on q");
        let total = s.total();
        if total == 0 {
            return Verdict::Unit;
        }
        if total == 1 {
            return Verdict::Atom;
        }
        match s.zero_count() {
            0 => {}
            1 => return Verdict::Atom,
            z => {
                // {Zero} and {Zero, everything else}
                let mut rest = vec![MuClassIndex::Zero; z as usize - 1];
                rest.extend(s.elements().into_iter().skip(z as usize));
                return Verdict::Reducible(vec![vec![MuClassIndex::Zero], rest]);
            }
        }
        let counts = s.unit_counts().to_vec();
        for c in 0..self.q {
            if let Some(blocks) = self.split_proper(&counts, c) {
                return Verdict::Reducible(blocks);
            }
        }
        Verdict::Atom
    }

    // At least two blocks, each of class c.
    fn split_proper(&mut self, counts: &[u32], c: u32) -> Option<Vec<Block>> {
        let (work, parked) = self.park_identity(counts, c);
        let anchor = work.iter().position(|&k| k > 0)?;
        let mut found = None;
        self.for_each_block(&work, anchor, c, &mut |solver, block| {
            if block == work.as_slice() {
                return false;
            }
            let rest: Vec<u32> = work.iter().zip(block).map(|(a, b)| a - b).collect();
            if solver.cover(&rest, c) {
                let mut blocks = vec![block.to_vec()];
                solver.collect_blocks(rest, c, &mut blocks);
                found = Some(blocks);
                return true;
            }
            false
        });
        found.map(|blocks| self.materialize(blocks, parked))
    }

    // For c != 0 the x0 labels fit in any block without changing its class;
    // set them aside and hand them to the first block at the end.
    fn park_identity(&self, counts: &[u32], c: u32) -> (Vec<u32>, u32) {
        let mut work = counts.to_vec();
        if c != 0 && work.iter().skip(1).any(|&k| k > 0) {
            let parked = work[0];
            work[0] = 0;
            (work, parked)
        } else {
            (work, 0)
        }
    }

    fn materialize(&self, blocks: Vec<Vec<u32>>, parked: u32) -> Vec<Block> {
        let mut out: Vec<Block> = blocks
            .into_iter()
            .map(|b| {
                b.iter()
                    .enumerate()
                    .flat_map(|(i, &k)| std::iter::repeat_n(MuClassIndex::Unit(i as u32), k as usize))
                    .collect()
            })
            .collect();
        if parked > 0 {
            let first = &mut out[0];
            first.extend(std::iter::repeat_n(MuClassIndex::Unit(0), parked as usize));
            first.sort();
        }
        out
    }

    /// Can the nonempty multiset `counts` be split into one or more blocks of class `c`?
    fn cover(&mut self, counts: &[u32], c: u32) -> bool {
        self.cover_block(counts, c).is_some()
    }

    fn cover_block(&mut self, counts: &[u32], c: u32) -> Option<Vec<u32>> {
        let key = (counts.to_vec(), c);
        if let Some(v) = self.memo.get(&key) {
            return v.clone();
        }
        let anchor = counts
            .iter()
            .position(|&k| k > 0)
            .expect("cover called on empty multiset");
        let mut chosen = None;
        self.for_each_block(counts, anchor, c, &mut |solver, block| {
            if block == counts {
                chosen = Some(block.to_vec());
                return true;
            }
            let rest: Vec<u32> = counts.iter().zip(block).map(|(a, b)| a - b).collect();
            if solver.cover(&rest, c) {
                chosen = Some(block.to_vec());
                return true;
            }
            false
        });
        self.memo.insert(key, chosen.clone());
        chosen
    }

    fn collect_blocks(&mut self, mut counts: Vec<u32>, c: u32, out: &mut Vec<Vec<u32>>) {
        while counts.iter().any(|&k| k > 0) {
            let block = self
                .cover_block(&counts, c)
                .expect("cover succeeded on this multiset");
            for (a, b) in counts.iter_mut().zip(&block) {
                *a -= b;
            }
            out.push(block);
        }
    }

    /// Calls `f` on every sub-multiset of `counts` containing at least one
    /// `anchor` label and no label below it, whose class is `c`, smallest
    /// blocks first. Stops when `f` returns true.
    fn for_each_block(
        &mut self,
        counts: &[u32],
        anchor: usize,
        c: u32,
        f: &mut dyn FnMut(&mut Self, &[u32]) -> bool,
    ) {
        let q = self.q as usize;
        let max_size: u32 = counts.iter().sum();
        let mut block = vec![0u32; q];
        for size in 1..=max_size {
            if self.blocks_of_size(counts, anchor, anchor, size, 0, c, &mut block, f) {
                return;
            }
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn blocks_of_size(
        &mut self,
        counts: &[u32],
        anchor: usize,
        idx: usize,
        remaining: u32,
        sum: u32,
        c: u32,
        block: &mut Vec<u32>,
        f: &mut dyn FnMut(&mut Self, &[u32]) -> bool,
    ) -> bool {
        let q = self.q as usize;
        if idx == q {
            return remaining == 0 && sum == c && f(self, block);
        }
        let lo = if idx == anchor { 1 } else { 0 };
        let hi = counts[idx].min(remaining);
        if lo > hi {
            return false;
        }
        for k in lo..=hi {
            block[idx] = k;
            let s = (sum as u64 + k as u64 * idx as u64) % q as u64;
            if self.blocks_of_size(counts, anchor, idx + 1, remaining - k, s as u32, c, block, f) {
                block[idx] = 0;
                return true;
            }
        }
        block[idx] = 0;
        false
    }
}

/// Decides one signature with a fresh solver.
pub fn signature_is_atom(s: &Signature) -> Verdict {
    SignatureSolver::new(s.q()).decide(s)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableEntry {
    pub signature: Signature,
    pub verdict: Verdict,
}

/// Verdicts for every signature with no zero-class factor, an x0 count from
/// `x0_levels`, and at most `max_per_class` factors of each index `1..q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AtomTable {
    pub n: u64,
    pub q: u32,
    pub max_per_class: u32,
    pub x0_levels: Vec<u32>,
    pub entries: BTreeMap<Signature, Verdict>,
}

impl AtomTable {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, s: &Signature) -> Option<&Verdict> {
        self.entries.get(s)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Signature, &Verdict)> {
        self.entries.iter()
    }
}

/// Parameters of an atom table run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableSpec {
    pub n: u64,
    pub q: u32,
    pub max_per_class: u32,
    pub x0_levels: Vec<u32>,
}

impl TableSpec {
    pub fn new(n: u64, max_per_class: u32, x0_levels: &[u32], cap: u64) -> Result<Self> {
        if n < 3 || !is_prime_u64(n) {
            return Err(Error::BadModulus(n));
        }
        if max_per_class < 1 {
            return Err(Error::InvalidArgument("max_per_class must be at least 1".into()));
        }
        let mut levels = x0_levels.to_vec();
        levels.sort_unstable();
        levels.dedup();
        if levels.is_empty() {
            return Err(Error::InvalidArgument("need at least one x0 level".into()));
        }
        let q = ((n - 1) / 2) as u32;
        let spec = TableSpec {
            n,
            q,
            max_per_class,
            x0_levels: levels,
        };
        let entries = spec.entry_count();
        if entries > cap {
            return Err(Error::TableTooLarge { entries, cap });
        }
        Ok(spec)
    }

    pub fn per_level(&self) -> u64 {
        (self.max_per_class as u64 + 1)
            .checked_pow(self.q - 1)
            .unwrap_or(u64::MAX)
    }

    pub fn entry_count(&self) -> u64 {
        self.per_level().saturating_mul(self.x0_levels.len() as u64)
    }

    /// Signature number `k` in table order: x0 level major, then the counts
    /// of indices `1..q` lexicographically.
    pub fn signature_at(&self, k: u64) -> Signature {
        let per_level = self.per_level();
        let level = self.x0_levels[(k / per_level) as usize];
        let mut rem = k % per_level;
        let radix = self.max_per_class as u64 + 1;
        let mut counts = vec![0u32; self.q as usize];
        counts[0] = level;
        for i in (1..self.q as usize).rev() {
            counts[i] = (rem % radix) as u32;
            rem /= radix;
        }
        Signature::new(self.q, 0, counts).expect("well-formed")
    }

    /// Cache-friendly name, e.g. `atoms-n11-m4-x0_0_1`.
    pub fn cache_stem(&self) -> String {
        let levels: Vec<String> = self.x0_levels.iter().map(|l| l.to_string()).collect();
        format!("atoms-n{}-m{}-x0_{}", self.n, self.max_per_class, levels.join("_"))
    }
}

const STREAM_CHUNK: u64 = 2048;

/// Table entries in table order, decided in parallel one chunk at a time.
pub struct TableStream {
    spec: TableSpec,
    next: u64,
    buffer: std::vec::IntoIter<TableEntry>,
}

impl TableStream {
    pub fn new(spec: TableSpec) -> Self {
        TableStream {
            spec,
            next: 0,
            buffer: Vec::new().into_iter(),
        }
    }

    pub fn spec(&self) -> &TableSpec {
        &self.spec
    }

    fn refill(&mut self) {
        let end = (self.next + STREAM_CHUNK).min(self.spec.entry_count());
        let spec = &self.spec;
        let entries: Vec<TableEntry> = (self.next..end)
            .into_par_iter()
            .map_init(
                || SignatureSolver::new(spec.q),
                |solver, k| {
                    let signature = spec.signature_at(k);
                    let verdict = solver.decide(&signature);
                    TableEntry { signature, verdict }
                },
            )
            .collect();
        self.next = end;
        self.buffer = entries.into_iter();
    }
}

impl Iterator for TableStream {
    type Item = TableEntry;

    fn next(&mut self) -> Option<TableEntry> {
        if let Some(e) = self.buffer.next() {
            return Some(e);
        }
        if self.next >= self.spec.entry_count() {
            return None;
        }
        self.refill();
        self.buffer.next()
    }
}

/// Exhaustive table with the default size cap.
pub fn generate_atom_table(n: u64, max_per_class: u32, x0_levels: &[u32]) -> Result<AtomTable> {
    generate_atom_table_capped(n, max_per_class, x0_levels, DEFAULT_TABLE_CAP)
}

pub fn generate_atom_table_capped(
    n: u64,
    max_per_class: u32,
    x0_levels: &[u32],
    cap: u64,
) -> Result<AtomTable> {
    let spec = TableSpec::new(n, max_per_class, x0_levels, cap)?;
    let entries = TableStream::new(spec.clone())
        .map(|e| (e.signature, e.verdict))
        .collect();
    Ok(AtomTable {
        n: spec.n,
        q: spec.q,
        max_per_class: spec.max_per_class,
        x0_levels: spec.x0_levels,
        entries,
    })
}

/// Signatures with an `Atom` verdict, in canonical order.
pub fn atoms_in_table(table: &AtomTable) -> Vec<Signature> {
    table
        .iter()
        .filter(|(_, v)| v.is_atom())
        .map(|(s, _)| s.clone())
        .collect()
}

#[derive(Serialize)]
struct SignatureJson<'a> {
    zero: u32,
    counts: &'a [u32],
}

#[derive(Serialize)]
struct EntryJson<'a> {
    signature: SignatureJson<'a>,
    verdict: &'static str,
    witness: Option<Vec<Vec<String>>>,
}

fn entry_json(e: &TableEntry) -> EntryJson<'_> {
    EntryJson {
        signature: SignatureJson {
            zero: e.signature.zero_count(),
            counts: e.signature.unit_counts(),
        },
        verdict: e.verdict.label(),
        witness: e.verdict.witness().map(|blocks| {
            blocks
                .iter()
                .map(|b| b.iter().map(|i| i.to_string()).collect())
                .collect()
        }),
    }
}

/// `{"signature":{"zero":0,"counts":[...]},"verdict":"atom","witness":null}`.
pub fn entry_to_json(e: &TableEntry) -> serde_json::Value {
    serde_json::to_value(entry_json(e)).expect("entry serializes")
}

/// Writes entries as a JSON array, one entry per line.
pub fn write_table_json<W: Write>(
    out: &mut W,
    entries: impl Iterator<Item = TableEntry>,
) -> std::io::Result<()> {
    out.write_all(b"[")?;
    for (i, e) in entries.enumerate() {
        out.write_all(if i == 0 { b"\n" } else { b",\n" })?;
        serde_json::to_writer(&mut *out, &entry_json(&e))?;
    }
    out.write_all(b"\n]\n")
}

/// Writes entries as CSV: `zero,x0,...,x{q-1},verdict,witness`.
pub fn write_table_csv<W: Write>(
    out: &mut W,
    q: u32,
    entries: impl Iterator<Item = TableEntry>,
) -> std::io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["zero".to_string()];
    header.extend((0..q).map(|i| format!("x{i}")));
    header.push("verdict".into());
    header.push("witness".into());
    w.write_record(&header)?;
    for e in entries {
        let mut row = vec![e.signature.zero_count().to_string()];
        row.extend(e.signature.unit_counts().iter().map(|c| c.to_string()));
        row.push(e.verdict.label().to_string());
        row.push(e.verdict.witness().map(format_witness).unwrap_or_default());
        w.write_record(&row)?;
    }
    w.flush()
}

/// One line per entry: signature, verdict and witness.
pub fn write_table_text<W: Write>(
    out: &mut W,
    entries: impl Iterator<Item = TableEntry>,
) -> std::io::Result<()> {
    for e in entries {
        match e.verdict.witness() {
            Some(w) => writeln!(out, "{}\t{}\t{}", e.signature, e.verdict.label(), format_witness(w))?,
            None => writeln!(out, "{}\t{}", e.signature, e.verdict.label())?,
        }
    }
    Ok(())
}
