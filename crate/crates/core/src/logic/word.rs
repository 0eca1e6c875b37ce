use std::collections::BTreeSet;
use std::fmt;

/// An ultimately periodic infinite word `prefix . loop^omega` over sets of
/// atomic propositions.
///
/// Valuations are stored as bitmasks over a sorted proposition list, so a
/// word supports at most 64 distinct propositions. Position `n` beyond the
/// prefix wraps into the loop.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UltimatelyPeriodicWord {
    props: Vec<String>,
    prefix: Vec<u64>,
    loop_part: Vec<u64>,
}

impl UltimatelyPeriodicWord {
    /// Build a word from explicit valuation sets. Propositions mentioned in a
    /// step but absent from `props` are added; the loop must be nonempty.
    pub fn new(
        props: Vec<String>,
        prefix: Vec<BTreeSet<String>>,
        loop_part: Vec<BTreeSet<String>>,
    ) -> Self {
        assert!(!loop_part.is_empty(), "loop part must be nonempty");
        let mut all: BTreeSet<String> = props.into_iter().collect();
        for step in prefix.iter().chain(loop_part.iter()) {
            all.extend(step.iter().cloned());
        }
        let props: Vec<String> = all.into_iter().collect();
        assert!(props.len() <= 64, "at most 64 propositions per word");
        let encode = |step: &BTreeSet<String>| -> u64 {
            let mut mask = 0;
            for p in step {
                let idx = props.binary_search(p).expect("proposition registered");
                mask |= 1 << idx;
            }
            mask
        };
        let prefix = prefix.iter().map(encode).collect();
        let loop_part = loop_part.iter().map(encode).collect();
        Self {
            props,
            prefix,
            loop_part,
        }
    }

    /// Build directly from masks over an already sorted proposition list.
    pub fn from_masks(props: Vec<String>, prefix: Vec<u64>, loop_part: Vec<u64>) -> Self {
        assert!(!loop_part.is_empty(), "loop part must be nonempty");
        assert!(props.windows(2).all(|w| w[0] < w[1]), "props sorted, unique");
        assert!(props.len() <= 64, "at most 64 propositions per word");
        Self {
            props,
            prefix,
            loop_part,
        }
    }

    pub fn props(&self) -> &[String] {
        &self.props
    }

    pub fn prefix_len(&self) -> usize {
        self.prefix.len()
    }

    pub fn loop_len(&self) -> usize {
        self.loop_part.len()
    }

    pub fn prefix_masks(&self) -> &[u64] {
        &self.prefix
    }

    pub fn loop_masks(&self) -> &[u64] {
        &self.loop_part
    }

    /// Index of a proposition in the sorted list, if present.
    pub fn prop_index(&self, name: &str) -> Option<usize> {
        self.props.binary_search_by(|p| p.as_str().cmp(name)).ok()
    }

    /// Valuation mask at position `n`, wrapping into the loop.
    pub fn mask_at(&self, n: usize) -> u64 {
        if n < self.prefix.len() {
            self.prefix[n]
        } else {
            self.loop_part[(n - self.prefix.len()) % self.loop_part.len()]
        }
    }

    /// Whether proposition `name` holds at position `n`.
    pub fn holds_at(&self, name: &str, n: usize) -> bool {
        match self.prop_index(name) {
            Some(idx) => self.mask_at(n) & (1 << idx) != 0,
            None => false,
        }
    }

    /// The suffix starting at position `n`, as a word in its own right.
    pub fn suffix(&self, n: usize) -> Self {
        if n <= self.prefix.len() {
            Self {
                props: self.props.clone(),
                prefix: self.prefix[n..].to_vec(),
                loop_part: self.loop_part.clone(),
            }
        } else {
            let shift = (n - self.prefix.len()) % self.loop_part.len();
            let mut rotated = self.loop_part[shift..].to_vec();
            rotated.extend_from_slice(&self.loop_part[..shift]);
            Self {
                props: self.props.clone(),
                prefix: Vec::new(),
                loop_part: rotated,
            }
        }
    }

    fn fmt_step(&self, mask: u64, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        let mut first = true;
        for (idx, p) in self.props.iter().enumerate() {
            if mask & (1 << idx) != 0 {
                if !first {
                    write!(f, ",")?;
                }
                write!(f, "{p}")?;
                first = false;
            }
        }
        write!(f, "}}")
    }
}

impl fmt::Display for UltimatelyPeriodicWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &mask in &self.prefix {
            self.fmt_step(mask, f)?;
        }
        write!(f, ";")?;
        for &mask in &self.loop_part {
            self.fmt_step(mask, f)?;
        }
        Ok(())
    }
}
