//! Set partitions of `{0, …, n-1}`: noncrossing, interval and irreducible
//! partitions, the irreducible refinement order ≪, colourings and the
//! vertical-no-repeat closure.
//!
//! Elements are 0-based internally. The CLI prints them 1-based.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::GQ;

/// Default enumeration guard: Catalan(14) = 2 674 440 partitions.
pub const DEFAULT_MAX_N: usize = 14;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct SetPartition {
    n: usize,
    /// Blocks are strictly increasing and sorted by their minimum.
    blocks: Vec<Vec<usize>>,
}

impl SetPartition {
    pub fn new(n: usize, mut blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = vec![false; n];
        for b in &mut blocks {
            if b.is_empty() {
                return Err(Error::domain("partition blocks must be nonempty"));
            }
            b.sort_unstable();
            for &e in b.iter() {
                if e >= n {
                    return Err(Error::domain(format!("element {e} outside ground set of size {n}")));
                }
                if seen[e] {
                    return Err(Error::domain(format!("element {e} appears in two blocks")));
                }
                seen[e] = true;
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::domain("blocks do not cover the ground set"));
        }
        blocks.sort_unstable_by_key(|b| b[0]);
        Ok(SetPartition { n, blocks })
    }

    fn from_sorted(n: usize, mut blocks: Vec<Vec<usize>>) -> Self {
        for b in &mut blocks {
            b.sort_unstable();
        }
        blocks.sort_unstable_by_key(|b| b[0]);
        SetPartition { n, blocks }
    }

    /// Builds a partition from a block label per element.
    pub fn from_labels(labels: &[usize]) -> Self {
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        let mut index = std::collections::HashMap::new();
        for (e, &l) in labels.iter().enumerate() {
            let k = *index.entry(l).or_insert_with(|| {
                blocks.push(Vec::new());
                blocks.len() - 1
            });
            blocks[k].push(e);
        }
        Self::from_sorted(labels.len(), blocks)
    }

    /// The one-block partition 1̂ₙ.
    pub fn one(n: usize) -> Self {
        SetPartition { n, blocks: if n == 0 { vec![] } else { vec![(0..n).collect()] } }
    }

    /// The partition into singletons 0̂ₙ.
    pub fn discrete(n: usize) -> Self {
        SetPartition { n, blocks: (0..n).map(|i| vec![i]).collect() }
    }

    /// Interval partition from block sizes.
    pub fn from_composition(sizes: &[usize]) -> Self {
        let mut blocks = Vec::with_capacity(sizes.len());
        let mut start = 0;
        for &s in sizes {
            blocks.push((start..start + s).collect());
            start += s;
        }
        SetPartition { n: start, blocks }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    /// Block index of every element.
    pub fn labels(&self) -> Vec<usize> {
        let mut out = vec![0; self.n];
        for (k, b) in self.blocks.iter().enumerate() {
            for &e in b {
                out[e] = k;
            }
        }
        out
    }

    pub fn same_block(&self, a: usize, b: usize) -> bool {
        let labels = self.labels();
        labels[a] == labels[b]
    }

    pub fn is_noncrossing(&self) -> bool {
        let labels = self.labels();
        // a < b < c < d with a~c, b~d, a≁b is a crossing.
        for b1 in &self.blocks {
            for w in b1.windows(2) {
                let (a, c) = (w[0], w[1]);
                for b in a + 1..c {
                    let lb = labels[b];
                    if lb == labels[a] {
                        continue;
                    }
                    if self.blocks[lb].iter().any(|&d| d > c) {
                        return false;
                    }
                }
            }
        }
        true
    }

    pub fn is_interval(&self) -> bool {
        self.blocks.iter().all(|b| b[b.len() - 1] - b[0] + 1 == b.len())
    }

    /// `0 ~ n-1`; the empty partition is not irreducible.
    pub fn is_irreducible(&self) -> bool {
        self.n > 0 && self.blocks[0].last() == Some(&(self.n - 1))
    }

    /// `self ≤ other` in refinement order.
    pub fn refines(&self, other: &SetPartition) -> bool {
        if self.n != other.n {
            return false;
        }
        let lo = other.labels();
        self.blocks.iter().all(|b| b.iter().all(|&e| lo[e] == lo[b[0]]))
    }

    /// For each block, the immediately enclosing block, or `None` for an
    /// outer block. Meant for noncrossing partitions.
    pub fn parents(&self) -> Vec<Option<usize>> {
        self.blocks
            .iter()
            .map(|b| {
                let (lo, hi) = (b[0], b[b.len() - 1]);
                self.blocks
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| c[0] < lo && hi < c[c.len() - 1])
                    .max_by_key(|(_, c)| c.iter().copied().filter(|&e| e < lo).max())
                    .map(|(k, _)| k)
            })
            .collect()
    }

    /// Indices of the outer and inner blocks.
    pub fn outer_inner(&self) -> (Vec<usize>, Vec<usize>) {
        let parents = self.parents();
        let mut outer = Vec::new();
        let mut inner = Vec::new();
        for (k, p) in parents.iter().enumerate() {
            if p.is_some() {
                inner.push(k);
            } else {
                outer.push(k);
            }
        }
        (outer, inner)
    }

    pub fn is_outer(&self, block: usize) -> bool {
        self.parents()[block].is_none()
    }

    /// The smallest interval partition above `self`: convex hulls of the outer blocks.
    pub fn interval_closure(&self) -> SetPartition {
        let (outer, _) = self.outer_inner();
        let blocks = outer
            .into_iter()
            .map(|k| {
                let b = &self.blocks[k];
                (b[0]..=b[b.len() - 1]).collect()
            })
            .collect();
        Self::from_sorted(self.n, blocks)
    }

    /// Restriction to a sorted subset, renumbered to `0..subset.len()`.
    pub fn restrict(&self, subset: &[usize]) -> SetPartition {
        let labels = self.labels();
        let restricted: Vec<usize> = subset.iter().map(|&e| labels[e]).collect();
        Self::from_labels(&restricted)
    }

    /// Restrictions to the blocks of the interval closure, in order.
    pub fn irreducible_components(&self) -> Vec<SetPartition> {
        self.interval_closure().blocks.iter().map(|b| self.restrict(b)).collect()
    }

    /// Concatenation: `other` is placed after `self`.
    pub fn concat(&self, other: &SetPartition) -> SetPartition {
        let mut blocks = self.blocks.clone();
        blocks.extend(other.blocks.iter().map(|b| b.iter().map(|e| e + self.n).collect()));
        Self::from_sorted(self.n + other.n, blocks)
    }

    /// Merges two blocks.
    fn merge(&self, a: usize, b: usize) -> SetPartition {
        let mut blocks = Vec::with_capacity(self.blocks.len() - 1);
        let mut merged = self.blocks[a].clone();
        merged.extend_from_slice(&self.blocks[b]);
        for (k, blk) in self.blocks.iter().enumerate() {
            if k != a && k != b {
                blocks.push(blk.clone());
            }
        }
        blocks.push(merged);
        Self::from_sorted(self.n, blocks)
    }

    /// 1-based blocks for display and serialization.
    pub fn one_based(&self) -> Vec<Vec<usize>> {
        self.blocks.iter().map(|b| b.iter().map(|e| e + 1).collect()).collect()
    }
}

impl fmt::Debug for SetPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, b) in self.one_based().iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            let inner: Vec<String> = b.iter().map(|e| e.to_string()).collect();
            write!(f, "{{{}}}", inner.join(","))?;
        }
        write!(f, "}}")
    }
}

/// `π ≪ ρ`: π ≤ ρ and π restricts irreducibly to every block of ρ.
pub fn is_ll(pi: &SetPartition, rho: &SetPartition) -> bool {
    if !pi.refines(rho) {
        return false;
    }
    let labels = pi.labels();
    rho.blocks.iter().all(|w| labels[w[0]] == labels[w[w.len() - 1]])
}

fn check_guard(n: usize, max_n: usize) -> Result<()> {
    if n == 0 || n > max_n {
        return Err(Error::limit(format!("partition size {n} outside 1..={max_n}")));
    }
    Ok(())
}

/// All noncrossing partitions of the sorted element list `elems`, each as a
/// list of blocks. The block containing `elems[0]` is placed first; the gaps
/// it leaves are filled independently.
fn nc_blocks(elems: &[usize]) -> Vec<Vec<Vec<usize>>> {
    if elems.is_empty() {
        return vec![Vec::new()];
    }
    let rest = &elems[1..];
    let mut out = Vec::new();
    // choose the remaining members of the first block as a subset of `rest`
    let m = rest.len();
    for mask in 0u32..(1u32 << m) {
        let mut block = vec![elems[0]];
        let mut gaps: Vec<&[usize]> = Vec::new();
        let mut start = 0;
        for (j, &e) in rest.iter().enumerate() {
            if mask & (1 << j) != 0 {
                block.push(e);
                gaps.push(&rest[start..j]);
                start = j + 1;
            }
        }
        gaps.push(&rest[start..]);
        let mut partial: Vec<Vec<Vec<usize>>> = vec![vec![block]];
        for gap in gaps {
            if gap.is_empty() {
                continue;
            }
            let fills = nc_blocks(gap);
            let mut next = Vec::with_capacity(partial.len() * fills.len());
            for p in &partial {
                for f in &fills {
                    let mut q = p.clone();
                    q.extend(f.iter().cloned());
                    next.push(q);
                }
            }
            partial = next;
        }
        out.extend(partial);
    }
    out
}

/// NC(n) in a deterministic order, with the default size guard.
pub fn enumerate_nc(n: usize) -> Result<Vec<SetPartition>> {
    enumerate_nc_with_limit(n, DEFAULT_MAX_N)
}

pub fn enumerate_nc_with_limit(n: usize, max_n: usize) -> Result<Vec<SetPartition>> {
    check_guard(n, max_n)?;
    let elems: Vec<usize> = (0..n).collect();
    Ok(nc_blocks(&elems).into_iter().map(|b| SetPartition::from_sorted(n, b)).collect())
}

/// Interval partitions, i.e. compositions of n.
pub fn enumerate_interval(n: usize) -> Result<Vec<SetPartition>> {
    check_guard(n, 30)?;
    let mut out = Vec::with_capacity(1 << (n - 1));
    for mask in 0u32..(1u32 << (n - 1)) {
        let mut sizes = Vec::new();
        let mut len = 1;
        for j in 0..n - 1 {
            if mask & (1 << j) != 0 {
                sizes.push(len);
                len = 1;
            } else {
                len += 1;
            }
        }
        sizes.push(len);
        out.push(SetPartition::from_composition(&sizes));
    }
    Ok(out)
}

pub fn enumerate_irreducible(n: usize) -> Result<Vec<SetPartition>> {
    Ok(enumerate_nc(n)?.into_iter().filter(SetPartition::is_irreducible).collect())
}

/// A colouring `c: {0..n-1} → {0..s-1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Coloring {
    colors: Vec<usize>,
}

impl Coloring {
    pub fn new(colors: Vec<usize>) -> Self {
        Coloring { colors }
    }

    pub fn from_word(w: &crate::ncpoly::Word) -> Self {
        Coloring { colors: w.letters().iter().map(|l| l.index()).collect() }
    }

    pub fn n(&self) -> usize {
        self.colors.len()
    }

    pub fn colors(&self) -> &[usize] {
        &self.colors
    }

    pub fn color(&self, i: usize) -> usize {
        self.colors[i]
    }

    pub fn kernel(&self) -> SetPartition {
        SetPartition::from_labels(&self.colors)
    }

    /// `π ≤ ker c`.
    pub fn is_compatible(&self, pi: &SetPartition) -> bool {
        pi.n() == self.n() && pi.blocks().iter().all(|b| b.iter().all(|&e| self.colors[e] == self.colors[b[0]]))
    }

    /// Colour of a block of a compatible partition.
    pub fn block_color(&self, block: &[usize]) -> usize {
        self.colors[block[0]]
    }
}

/// NC(n;c), by filtering NC(n).
pub fn enumerate_nc_colored(c: &Coloring) -> Result<Vec<SetPartition>> {
    Ok(enumerate_nc(c.n())?.into_iter().filter(|p| c.is_compatible(p)).collect())
}

fn require_compatible(pi: &SetPartition, c: &Coloring) -> Result<()> {
    if !c.is_compatible(pi) {
        return Err(Error::domain(format!("partition {pi:?} is not compatible with the colouring")));
    }
    Ok(())
}

/// Every inner block nests immediately inside a block of a different colour.
pub fn is_vnrp(rho: &SetPartition, c: &Coloring) -> Result<bool> {
    require_compatible(rho, c)?;
    let parents = rho.parents();
    Ok(parents.iter().enumerate().all(|(k, p)| match p {
        Some(p) => c.block_color(&rho.blocks()[k]) != c.block_color(&rho.blocks()[*p]),
        None => true,
    }))
}

/// The unique ≪-maximal VNRP partition above `sigma`, obtained by merging
/// every inner block into its parent while the two share a colour.
pub fn vnrp_closure(sigma: &SetPartition, c: &Coloring) -> Result<SetPartition> {
    require_compatible(sigma, c)?;
    let mut rho = sigma.clone();
    loop {
        let parents = rho.parents();
        let offending = parents.iter().enumerate().find_map(|(k, p)| {
            p.filter(|&p| c.block_color(&rho.blocks()[k]) == c.block_color(&rho.blocks()[p])).map(|p| (k, p))
        });
        match offending {
            Some((k, p)) => rho = rho.merge(k, p),
            None => return Ok(rho),
        }
    }
}

/// Outcome of checking the closure lemma on a finite poset.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosureCheck {
    /// `c` is increasing, order preserving and idempotent.
    pub is_closure_operator: bool,
    /// `F(x) = Σ_{closed y ≤ x} g(y)` for every closed `x`.
    pub premise: bool,
    /// `g(y) = Σ_{c(z) = y} f(z)` for every closed `y`.
    pub conclusion: bool,
}

impl ClosureCheck {
    pub fn holds(&self) -> bool {
        self.is_closure_operator && (!self.premise || self.conclusion)
    }
}

/// Verifies the closure lemma by explicit summation: given a closure operator
/// `c` on `elems` ordered by `le`, and weights `f` on all elements and `g` on
/// closed ones, checks the premise and the conclusion separately.
pub fn closure_check<T: PartialEq + Clone>(
    elems: &[T],
    le: impl Fn(&T, &T) -> bool,
    closure: impl Fn(&T) -> T,
    f: impl Fn(&T) -> GQ,
    g: impl Fn(&T) -> GQ,
) -> ClosureCheck {
    let closed_of: Vec<T> = elems.iter().map(&closure).collect();
    let mut is_closure_operator = true;
    for (x, cx) in elems.iter().zip(&closed_of) {
        if !le(x, cx) || closure(cx) != *cx {
            is_closure_operator = false;
        }
        for (y, cy) in elems.iter().zip(&closed_of) {
            if le(x, y) && !le(cx, cy) {
                is_closure_operator = false;
            }
        }
    }
    let fv: Vec<GQ> = elems.iter().map(&f).collect();
    let closed: Vec<usize> = (0..elems.len()).filter(|&k| closed_of[k] == elems[k]).collect();
    let gv: Vec<(usize, GQ)> = closed.iter().map(|&k| (k, g(&elems[k]))).collect();

    let mut premise = true;
    for &x in &closed {
        let big_f: GQ = (0..elems.len()).filter(|&z| le(&elems[z], &elems[x])).map(|z| fv[z].clone()).sum();
        let via_g: GQ = gv.iter().filter(|(y, _)| le(&elems[*y], &elems[x])).map(|(_, v)| v.clone()).sum();
        if big_f != via_g {
            premise = false;
        }
    }
    let mut conclusion = true;
    for (y, gy) in &gv {
        let s: GQ = (0..elems.len()).filter(|&z| closed_of[z] == elems[*y]).map(|z| fv[z].clone()).sum();
        if s != *gy {
            conclusion = false;
        }
    }
    ClosureCheck { is_closure_operator, premise, conclusion }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sp(n: usize, blocks: &[&[usize]]) -> SetPartition {
        // tests use 1-based blocks, like the printed form
        SetPartition::new(n, blocks.iter().map(|b| b.iter().map(|e| e - 1).collect()).collect()).unwrap()
    }

    #[test]
    fn counts() {
        assert_eq!(enumerate_nc(1).unwrap().len(), 1);
        assert_eq!(enumerate_nc(4).unwrap().len(), 14);
        assert_eq!(enumerate_nc(6).unwrap().len(), 132);
        assert_eq!(enumerate_interval(1).unwrap().len(), 1);
        assert_eq!(enumerate_interval(3).unwrap().len(), 4);
        assert_eq!(enumerate_interval(5).unwrap().len(), 16);
        assert_eq!(enumerate_irreducible(2).unwrap().len(), 1);
        assert_eq!(enumerate_irreducible(3).unwrap().len(), 2);
        assert_eq!(enumerate_irreducible(4).unwrap().len(), 5);
        assert!(matches!(enumerate_nc(0), Err(Error::Limit(_))));
        assert!(matches!(enumerate_nc(15), Err(Error::Limit(_))));
    }

    #[test]
    fn enumeration_is_noncrossing_and_distinct() {
        let all = enumerate_nc(7).unwrap();
        assert!(all.iter().all(SetPartition::is_noncrossing));
        let mut sorted = all.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), all.len());
        assert!(!sp(4, &[&[1, 3], &[2, 4]]).is_noncrossing());
    }

    #[test]
    fn outer_and_inner_blocks() {
        let p = sp(4, &[&[1, 4], &[2, 3]]);
        assert_eq!(p.outer_inner(), (vec![0], vec![1]));
        let q = sp(6, &[&[1, 6], &[2, 3], &[4, 5]]);
        assert_eq!(q.outer_inner(), (vec![0], vec![1, 2]));
        assert_eq!(q.parents(), vec![None, Some(0), Some(0)]);
        let r = sp(3, &[&[1, 2], &[3]]);
        assert_eq!(r.outer_inner().1, Vec::<usize>::new());
        let nested = sp(6, &[&[1, 6], &[2, 5], &[3, 4]]);
        assert_eq!(nested.parents(), vec![None, Some(0), Some(1)]);
    }

    #[test]
    fn interval_closure_examples() {
        assert_eq!(sp(3, &[&[1, 3], &[2]]).interval_closure(), SetPartition::one(3));
        assert_eq!(sp(2, &[&[1], &[2]]).interval_closure(), SetPartition::discrete(2));
        assert_eq!(sp(5, &[&[1, 4], &[2, 3], &[5]]).interval_closure(), sp(5, &[&[1, 2, 3, 4], &[5]]));
    }

    #[test]
    fn ll_examples() {
        assert!(!is_ll(&SetPartition::discrete(2), &SetPartition::one(2)));
        assert!(is_ll(&sp(4, &[&[1, 4], &[2, 3]]), &SetPartition::one(4)));
        for p in enumerate_nc(5).unwrap() {
            assert!(is_ll(&p, &p));
        }
    }

    #[test]
    fn vnrp_examples() {
        // singletons are not ≪-below the full block: 1 and 2 are not joined
        let mono = Coloring::new(vec![0, 0]);
        assert_eq!(vnrp_closure(&SetPartition::discrete(2), &mono).unwrap(), SetPartition::discrete(2));
        let mono3 = Coloring::new(vec![0, 0, 0]);
        assert_eq!(vnrp_closure(&sp(3, &[&[1, 3], &[2]]), &mono3).unwrap(), SetPartition::one(3));
        let alt = Coloring::new(vec![0, 1, 0]);
        let s = sp(3, &[&[1, 3], &[2]]);
        assert!(is_vnrp(&s, &alt).unwrap());
        assert_eq!(vnrp_closure(&s, &alt).unwrap(), s);
        assert!(matches!(vnrp_closure(&SetPartition::one(3), &alt), Err(Error::Domain(_))));
    }

    #[test]
    fn trivial_closure_check() {
        let r = closure_check(&[0u8], |a, b| a <= b, |&a| a, |_| GQ::from_int(7), |_| GQ::from_int(7));
        assert!(r.is_closure_operator && r.premise && r.conclusion);
    }

    #[test]
    fn components_concatenate() {
        for p in enumerate_nc(6).unwrap() {
            let comps = p.irreducible_components();
            assert!(comps.iter().all(SetPartition::is_irreducible));
            let joined = comps.iter().skip(1).fold(comps[0].clone(), |acc, c| acc.concat(c));
            assert_eq!(joined, p);
        }
    }
}
