//! Face tuples in canonical order: total dimension ascending, then
//! lexicographic by face id.

use std::ops::ControlFlow;

use crate::polytope::FaceId;

#[derive(Clone, Copy, Debug)]
pub(crate) struct Candidate {
    pub id: FaceId,
    pub dim: usize,
}

/// One candidate list per part, each sorted by face id (and hence by
/// dimension). In symmetric mode all lists are identical and only
/// nondecreasing index sequences are produced.
pub(crate) struct TupleSpace {
    lists: Vec<Vec<Candidate>>,
    symmetric: bool,
    /// `suffix_min[i]`/`suffix_max[i]`: dimension range reachable by
    /// positions `i..n`.
    suffix_min: Vec<usize>,
    suffix_max: Vec<usize>,
}

impl TupleSpace {
    pub fn new(lists: Vec<Vec<Candidate>>, symmetric: bool) -> Self {
        debug_assert!(lists
            .iter()
            .all(|l| l.windows(2).all(|w| w[0].id < w[1].id)));
        debug_assert!(!symmetric || lists.windows(2).all(|w| w[0].len() == w[1].len()));
        let n = lists.len();
        let mut suffix_min = vec![0usize; n + 1];
        let mut suffix_max = vec![0usize; n + 1];
        for i in (0..n).rev() {
            let (lo, hi) = lists[i].iter().fold((usize::MAX, 0), |(lo, hi), c| {
                (lo.min(c.dim), hi.max(c.dim))
            });
            suffix_min[i] = suffix_min[i + 1].saturating_add(lo);
            suffix_max[i] = suffix_max[i + 1] + hi;
        }
        TupleSpace {
            lists,
            symmetric,
            suffix_min,
            suffix_max,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.lists.iter().any(Vec::is_empty)
    }

    pub fn arity(&self) -> usize {
        self.lists.len()
    }

    /// Total dimensions that some tuple attains, ascending.
    pub fn levels(&self) -> std::ops::RangeInclusive<usize> {
        if self.is_empty() {
            #[allow(clippy::reversed_empty_ranges)]
            return 1..=0;
        }
        self.suffix_min[0]..=self.suffix_max[0]
    }

    /// Number of tuples across all levels.
    pub fn size(&self) -> u128 {
        if self.is_empty() {
            return 0;
        }
        if self.symmetric {
            // multisets of size n from L items: C(L + n - 1, n)
            let l = self.lists[0].len() as u128;
            let n = self.lists.len() as u128;
            (1..=n).fold(1u128, |acc, i| acc * (l + i - 1) / i)
        } else {
            self.lists.iter().map(|l| l.len() as u128).product()
        }
    }

    /// Visits every tuple whose dimensions sum to `level`, in lexicographic
    /// order of face ids.
    pub fn visit_level<B>(
        &self,
        level: usize,
        f: &mut impl FnMut(&[FaceId]) -> ControlFlow<B>,
    ) -> ControlFlow<B> {
        let mut buf = Vec::with_capacity(self.arity());
        self.descend(0, 0, level, &mut buf, f)
    }

    fn descend<B>(
        &self,
        pos: usize,
        start: usize,
        remaining: usize,
        buf: &mut Vec<FaceId>,
        f: &mut impl FnMut(&[FaceId]) -> ControlFlow<B>,
    ) -> ControlFlow<B> {
        if pos == self.lists.len() {
            return if remaining == 0 {
                f(buf)
            } else {
                ControlFlow::Continue(())
            };
        }
        let from = if self.symmetric { start } else { 0 };
        let (rest_min, rest_max) = (self.suffix_min[pos + 1], self.suffix_max[pos + 1]);
        for (idx, c) in self.lists[pos].iter().enumerate().skip(from) {
            if c.dim + rest_min > remaining {
                break;
            }
            if c.dim + rest_max < remaining {
                continue;
            }
            buf.push(c.id);
            self.descend(pos + 1, idx, remaining - c.dim, buf, f)?;
            buf.pop();
        }
        ControlFlow::Continue(())
    }

    pub fn collect_level(&self, level: usize) -> Vec<Vec<FaceId>> {
        let mut out = Vec::new();
        let _ = self.visit_level::<()>(level, &mut |t| {
            out.push(t.to_vec());
            ControlFlow::Continue(())
        });
        out
    }
}
