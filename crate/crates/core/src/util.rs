//! Small numeric and bookkeeping helpers.

use std::collections::HashMap;
use std::hash::Hash;

/// Fibonacci numbers with `F_1 = F_2 = 1`; `fib(0) = 0`.
pub fn fib(k: usize) -> u64 {
    let (mut a, mut b) = (0u64, 1u64);
    for _ in 0..k {
        (a, b) = (b, a + b);
    }
    a
}

pub fn binomial2(n: i64) -> i64 {
    if n < 2 {
        0
    } else {
        n * (n - 1) / 2
    }
}

pub fn factorial(n: usize) -> num_bigint::BigUint {
    (1..=n as u64).fold(num_bigint::BigUint::from(1u32), |acc, i| acc * i)
}

/// Disjoint-set forest over arbitrary hashable keys.
pub struct UnionFind<T> {
    index: HashMap<T, usize>,
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl<T: Copy + Eq + Hash> UnionFind<T> {
    pub fn new<I: IntoIterator<Item = T>>(items: I) -> Self {
        let index: HashMap<T, usize> = items.into_iter().enumerate().map(|(i, x)| (x, i)).collect();
        let n = index.len();
        UnionFind {
            index,
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    fn root(&mut self, mut i: usize) -> usize {
        while self.parent[i] != i {
            self.parent[i] = self.parent[self.parent[i]];
            i = self.parent[i];
        }
        i
    }

    pub fn find(&mut self, x: T) -> usize {
        let i = self.index[&x];
        self.root(i)
    }

    /// Merges the classes of `a` and `b`; false if they were already joined.
    pub fn union(&mut self, a: T, b: T) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (big, small) = if self.size[ra] >= self.size[rb] { (ra, rb) } else { (rb, ra) };
        self.parent[small] = big;
        self.size[big] += self.size[small];
        true
    }

    pub fn same(&mut self, a: T, b: T) -> bool {
        self.find(a) == self.find(b)
    }

    pub fn class_size(&mut self, x: T) -> usize {
        let r = self.find(x);
        self.size[r]
    }
}
