use serde::{Deserialize, Serialize};

/// Explicit limits for every search that may not terminate on its own.
///
/// Engines whose search space is provably finite ignore `max_len`,
/// `max_exp` and `max_den`, but all of them stop at `max_count` items.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Bounds {
    pub max_len: usize,
    pub max_exp: u32,
    pub max_den: u64,
    pub max_count: usize,
    pub depth: usize,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds { max_len: 12, max_exp: 12, max_den: 64, max_count: 10_000, depth: 8 }
    }
}

impl Bounds {
    pub fn with_max_len(mut self, v: usize) -> Self {
        self.max_len = v;
        self
    }

    pub fn with_max_exp(mut self, v: u32) -> Self {
        self.max_exp = v;
        self
    }

    pub fn with_max_den(mut self, v: u64) -> Self {
        self.max_den = v;
        self
    }

    pub fn with_max_count(mut self, v: usize) -> Self {
        self.max_count = v;
        self
    }

    pub fn with_depth(mut self, v: usize) -> Self {
        self.depth = v;
        self
    }
}

/// Items found by a bounded search. `complete` is true only when no item
/// outside the returned list exists.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Enumeration<T> {
    pub items: Vec<T>,
    pub complete: bool,
    pub bounds: Bounds,
}

impl<T> Enumeration<T> {
    pub fn new(items: Vec<T>, complete: bool, bounds: Bounds) -> Self {
        Enumeration { items, complete, bounds }
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn map<U>(self, f: impl FnMut(T) -> U) -> Enumeration<U> {
        Enumeration { items: self.items.into_iter().map(f).collect(), complete: self.complete, bounds: self.bounds }
    }
}
