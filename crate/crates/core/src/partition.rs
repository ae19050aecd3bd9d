//! Set partitions of `{1..n}` stored as restricted growth strings.

use std::fmt;

use crate::error::{Error, Result};

pub const MAX_ENUMERATION: usize = 12;

/// A set partition. `rgs[i]` is the block label of element `i+1`; labels appear
/// in order of first occurrence, so blocks are sorted by least element.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    rgs: Vec<u8>,
}

const LABELS: &[u8] = b"0123456789abcdefghijklmnopqrstuvwxyz";

impl Partition {
    pub fn from_rgs(rgs: Vec<u8>) -> Result<Self> {
        if rgs.is_empty() {
            return Err(Error::InvalidParameter("partition of the empty set".into()));
        }
        let mut next = 0u8;
        for &b in &rgs {
            if b > next {
                return Err(Error::InvalidParameter(format!("{rgs:?} is not a restricted growth string")));
            }
            if b == next {
                next += 1;
            }
        }
        Ok(Self { rgs })
    }

    /// Build from arbitrary labels, relabelling by first occurrence.
    pub fn from_labels(labels: &[usize]) -> Result<Self> {
        let mut map: Vec<(usize, u8)> = Vec::new();
        let mut rgs = Vec::with_capacity(labels.len());
        for &l in labels {
            let b = match map.iter().find(|(k, _)| *k == l) {
                Some(&(_, v)) => v,
                None => {
                    let v = map.len() as u8;
                    map.push((l, v));
                    v
                }
            };
            rgs.push(b);
        }
        Self::from_rgs(rgs)
    }

    /// Blocks given as 1-based element lists.
    pub fn from_blocks(n: usize, blocks: &[Vec<usize>]) -> Result<Self> {
        let mut labels = vec![usize::MAX; n];
        for (j, block) in blocks.iter().enumerate() {
            if block.is_empty() {
                return Err(Error::InvalidParameter("empty block".into()));
            }
            for &i in block {
                if i == 0 || i > n || labels[i - 1] != usize::MAX {
                    return Err(Error::InvalidParameter(format!("element {i} is out of range or repeated")));
                }
                labels[i - 1] = j;
            }
        }
        if labels.contains(&usize::MAX) {
            return Err(Error::InvalidParameter("blocks do not cover {1..n}".into()));
        }
        Self::from_labels(&labels)
    }

    /// Parse an RGS string such as `"0101"`; labels past 9 use `a`, `b`, ...
    pub fn parse_rgs(s: &str) -> Result<Self> {
        let rgs = s
            .bytes()
            .map(|c| {
                LABELS
                    .iter()
                    .position(|&l| l == c)
                    .map(|p| p as u8)
                    .ok_or_else(|| Error::InvalidParameter(format!("bad RGS character `{}`", c as char)))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_rgs(rgs)
    }

    pub fn single_block(n: usize) -> Self {
        Self { rgs: vec![0; n.max(1)] }
    }

    pub fn singletons(n: usize) -> Self {
        Self { rgs: (0..n.max(1)).map(|i| i as u8).collect() }
    }

    /// `{1,3,5,...}, {2,4,6,...}` on `n` (even) points.
    pub fn alternating(n: usize) -> Result<Self> {
        if n < 2 || n % 2 == 1 {
            return Err(Error::InvalidParameter(format!("alternating partition needs even n ≥ 2, got {n}")));
        }
        Ok(Self { rgs: (0..n).map(|i| (i % 2) as u8).collect() })
    }

    /// `{i, n+i}` for `i = 1..n`, a partition of `2n` points.
    pub fn pairs(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("pairs family needs n ≥ 1".into()));
        }
        Ok(Self { rgs: (0..2 * n).map(|i| (i % n) as u8).collect() })
    }

    pub fn n(&self) -> usize {
        self.rgs.len()
    }

    pub fn num_blocks(&self) -> usize {
        self.rgs.iter().copied().max().map_or(0, |m| m as usize + 1)
    }

    pub fn rgs(&self) -> &[u8] {
        &self.rgs
    }

    pub fn rgs_string(&self) -> String {
        self.rgs.iter().map(|&b| LABELS[b as usize] as char).collect()
    }

    /// Block label (0-based) of the 1-based element `i`.
    pub fn block_of(&self, i: usize) -> usize {
        self.rgs[i - 1] as usize
    }

    /// Blocks as sorted 1-based element lists, ordered by least element.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.num_blocks()];
        for (i, &b) in self.rgs.iter().enumerate() {
            out[b as usize].push(i + 1);
        }
        out
    }

    pub fn block_sizes(&self) -> Vec<usize> {
        let mut out = vec![0; self.num_blocks()];
        for &b in &self.rgs {
            out[b as usize] += 1;
        }
        out
    }

    /// No `a < b < c < d` with `a, c` in one block and `b, d` in another.
    pub fn is_noncrossing(&self) -> bool {
        // Scan left to right keeping a stack of open blocks; a block may only be
        // revisited while it is on top.
        let sizes = self.block_sizes();
        let mut seen = vec![0usize; sizes.len()];
        let mut stack: Vec<u8> = Vec::new();
        for &b in &self.rgs {
            if seen[b as usize] > 0 {
                while let Some(&top) = stack.last() {
                    if top == b {
                        break;
                    }
                    if seen[top as usize] < sizes[top as usize] {
                        return false;
                    }
                    stack.pop();
                }
            } else {
                stack.push(b);
            }
            seen[b as usize] += 1;
        }
        true
    }

    /// Relabel `i → i + k (mod n)`.
    pub fn rotate(&self, k: usize) -> Self {
        let n = self.n();
        let labels: Vec<usize> = (0..n).map(|i| self.rgs[(i + n - k % n) % n] as usize).collect();
        Self::from_labels(&labels).expect("rotation preserves validity")
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (j, block) in self.blocks().iter().enumerate() {
            if j > 0 {
                write!(f, ",")?;
            }
            write!(f, "{{")?;
            for (k, i) in block.iter().enumerate() {
                if k > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{i}")?;
            }
            write!(f, "}}")?;
        }
        write!(f, "}}")
    }
}

/// Lexicographic RGS enumeration of all partitions of `{1..n}`.
#[derive(Debug, Clone)]
pub struct Partitions {
    current: Option<Vec<u8>>,
    /// `maxes[i]` = max of `current[..=i]`.
    maxes: Vec<u8>,
}

impl Iterator for Partitions {
    type Item = Partition;

    fn next(&mut self) -> Option<Partition> {
        let cur = self.current.take()?;
        let out = Partition { rgs: cur.clone() };
        let mut a = cur;
        let n = a.len();
        let mut i = n;
        let mut advanced = false;
        while i > 1 {
            i -= 1;
            if a[i] <= self.maxes[i - 1] {
                a[i] += 1;
                self.maxes[i] = self.maxes[i - 1].max(a[i]);
                for j in i + 1..n {
                    a[j] = 0;
                    self.maxes[j] = self.maxes[i];
                }
                advanced = true;
                break;
            }
        }
        if advanced {
            self.current = Some(a);
        }
        Some(out)
    }
}

pub fn enumerate_partitions(n: usize) -> Result<Partitions> {
    if n == 0 || n > MAX_ENUMERATION {
        return Err(Error::CapExceeded {
            what: "partition enumeration",
            detail: format!("n = {n} is outside 1..={MAX_ENUMERATION}"),
        });
    }
    Ok(Partitions { current: Some(vec![0; n]), maxes: vec![0; n] })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts() {
        let counts: Vec<usize> = (1..=7).map(|n| enumerate_partitions(n).unwrap().count()).collect();
        assert_eq!(counts, vec![1, 2, 5, 15, 52, 203, 877]);
        assert_eq!(enumerate_partitions(1).unwrap().next().unwrap().blocks(), vec![vec![1]]);
        assert!(enumerate_partitions(13).is_err());
        assert!(enumerate_partitions(0).is_err());
    }

    #[test]
    fn order_is_lexicographic() {
        let all: Vec<String> = enumerate_partitions(3).unwrap().map(|p| p.rgs_string()).collect();
        assert_eq!(all, vec!["000", "001", "010", "011", "012"]);
    }

    #[test]
    fn crossing() {
        assert!(!Partition::parse_rgs("0101").unwrap().is_noncrossing());
        assert!(Partition::parse_rgs("0110").unwrap().is_noncrossing());
        assert!(Partition::parse_rgs("0120").unwrap().is_noncrossing());
        assert!(!Partition::parse_rgs("01202").unwrap().is_noncrossing());
        let nc = enumerate_partitions(5).unwrap().filter(|p| p.is_noncrossing()).count();
        assert_eq!(nc, 42);
    }

    #[test]
    fn constructors() {
        let p = Partition::from_blocks(4, &[vec![1, 3], vec![2, 4]]).unwrap();
        assert_eq!(p.rgs_string(), "0101");
        assert_eq!(p.to_string(), "{{1,3},{2,4}}");
        assert_eq!(Partition::pairs(3).unwrap().rgs_string(), "012012");
        assert_eq!(Partition::alternating(6).unwrap().rgs_string(), "010101");
        assert!(Partition::alternating(5).is_err());
        assert!(Partition::parse_rgs("0201").is_err());
        assert_eq!(Partition::parse_rgs("0102").unwrap().rotate(1).rgs_string(), "0121");
    }
}
