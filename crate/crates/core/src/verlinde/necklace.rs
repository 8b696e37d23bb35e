//! Enumeration of r-subsets of ℤ/n up to rotation.
//!
//! Subsets are binary words of length `n` (bit `i` set iff `i` is a member);
//! rotation classes are enumerated through their lexicographically least
//! representative with the Fredricksen–Kessler–Maiorana recursion, pruned to
//! words with exactly `r` ones. Each representative is reported together with
//! the size of its rotation orbit, which is its least period.

use rayon::prelude::*;

/// A fold over necklace representatives with per-prefix state.
///
/// `push` extends the state of a prefix by one more member; `leaf` consumes a
/// complete representative. Members are 0-based positions in increasing order.
pub trait NecklaceFold: Sync {
    type Frame: Clone + Send;
    type Acc: Send;

    fn root(&self) -> Self::Frame;
    fn empty(&self) -> Self::Acc;
    fn push(&self, parent: &Self::Frame, members: &[u32], new: u32, out: &mut Self::Frame);
    fn leaf(&self, frame: &Self::Frame, members: &[u32], orbit: u64, acc: &mut Self::Acc);
    fn merge(&self, acc: &mut Self::Acc, other: Self::Acc);
}

/// Partial word handed to a worker: positions `1..t` are fixed.
#[derive(Clone, Debug)]
struct Task {
    word: Vec<u8>,
    t: usize,
    p: usize,
    ones: usize,
}

/// Number of subtrees the search is cut into. Fixed, so that the grouping of
/// partial sums never depends on the thread count.
const TARGET_TASKS: usize = 512;

struct Walker<'a, F: NecklaceFold> {
    fold: &'a F,
    n: usize,
    r: usize,
    word: Vec<u8>,
    members: Vec<u32>,
    frames: Vec<F::Frame>,
}

impl<'a, F: NecklaceFold> Walker<'a, F> {
    fn new(fold: &'a F, n: usize, r: usize) -> Self {
        Walker {
            fold,
            n,
            r,
            word: vec![0; n + 1],
            members: Vec::with_capacity(r),
            frames: vec![fold.root(); r + 1],
        }
    }

    fn set(&mut self, t: usize, bit: u8) {
        self.word[t] = bit;
        if bit == 1 {
            let depth = self.members.len();
            let (lo, hi) = self.frames.split_at_mut(depth + 1);
            self.fold
                .push(&lo[depth], &self.members, (t - 1) as u32, &mut hi[0]);
            self.members.push((t - 1) as u32);
        }
    }

    fn unset(&mut self, t: usize) {
        if self.word[t] == 1 {
            self.members.pop();
        }
    }

    fn feasible(&self, t: usize, ones: usize) -> bool {
        ones <= self.r && ones + (self.n - t) >= self.r
    }

    fn run(&mut self, t: usize, p: usize, ones: usize, acc: &mut F::Acc) {
        if t > self.n {
            if self.n % p == 0 && ones == self.r {
                let frame = &self.frames[self.members.len()];
                self.fold.leaf(frame, &self.members, p as u64, acc);
            }
            return;
        }
        let copy = self.word[t - p];
        let ones_copy = ones + copy as usize;
        if self.feasible(t, ones_copy) {
            self.set(t, copy);
            self.run(t + 1, p, ones_copy, acc);
            self.unset(t);
        }
        if copy == 0 && self.feasible(t, ones + 1) {
            self.set(t, 1);
            self.run(t + 1, t, ones + 1, acc);
            self.unset(t);
        }
    }

    /// Same recursion, but stops at position `depth` and records the frontier.
    fn collect(&mut self, t: usize, p: usize, ones: usize, depth: usize, out: &mut Vec<Task>) {
        if t > depth || t > self.n {
            out.push(Task {
                word: self.word[..t].to_vec(),
                t,
                p,
                ones,
            });
            return;
        }
        let copy = self.word[t - p];
        let ones_copy = ones + copy as usize;
        if self.feasible(t, ones_copy) {
            self.word[t] = copy;
            self.collect(t + 1, p, ones_copy, depth, out);
        }
        if copy == 0 && self.feasible(t, ones + 1) {
            self.word[t] = 1;
            self.collect(t + 1, t, ones + 1, depth, out);
        }
        self.word[t] = 0;
    }

    fn resume(&mut self, task: &Task, acc: &mut F::Acc) {
        for (t, &bit) in task.word.iter().enumerate().skip(1) {
            self.set(t, bit);
        }
        self.run(task.t, task.p, task.ones, acc);
    }
}

fn frontier<F: NecklaceFold>(fold: &F, n: usize, r: usize) -> Vec<Task> {
    let mut walker = Walker::new(fold, n, r);
    let mut depth = 1;
    loop {
        let mut tasks = Vec::new();
        walker.collect(1, 1, 0, depth, &mut tasks);
        if tasks.len() >= TARGET_TASKS || depth >= n {
            return tasks;
        }
        depth += 1;
    }
}

/// Runs `fold` over every rotation class of `r`-subsets of `{0, …, n-1}`.
///
/// Work is split into a fixed set of subtrees that rayon evaluates in
/// parallel; partial results are merged in subtree order, so the outcome is
/// the same for any number of threads.
pub fn fold_necklaces<F: NecklaceFold>(fold: &F, n: usize, r: usize) -> F::Acc {
    assert!(r <= n && n >= 1);
    let tasks = frontier(fold, n, r);
    let parts: Vec<F::Acc> = tasks
        .par_iter()
        .map(|task| {
            let mut acc = fold.empty();
            Walker::new(fold, n, r).resume(task, &mut acc);
            acc
        })
        .collect();
    let mut total = fold.empty();
    for part in parts {
        fold.merge(&mut total, part);
    }
    total
}

/// Estimated number of necklace representatives, `⌈C(n, r) / n⌉`.
pub fn necklace_estimate(n: u64, r: u64) -> u128 {
    crate::arith::binomial_u128(n, r).div_ceil(n.max(1) as u128)
}
