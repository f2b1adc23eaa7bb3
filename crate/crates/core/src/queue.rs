use crate::active::NONE;
use crate::{Error, Result};

/// An indexed binary min-heap over keys `0..capacity`.
///
/// Each index carries one key, which can be lowered or raised in place.
/// Equal keys are ordered by index, so `argmin` returns the smallest index
/// among the minimal keys.
#[derive(Clone, Debug)]
pub struct MinPriorityQueue {
    keys: Vec<f64>,
    heap: Vec<usize>,
    pos: Vec<usize>,
}

impl MinPriorityQueue {
    /// A queue holding every index of `keys`, built in O(N).
    pub fn new(keys: Vec<f64>) -> MinPriorityQueue {
        let len = keys.len();
        let mut q = MinPriorityQueue {
            keys,
            heap: (0..len).collect(),
            pos: (0..len).collect(),
        };
        for p in (0..len / 2).rev() {
            q.sift_down(p);
        }
        q
    }

    /// An empty queue that can hold indices `0..capacity`.
    pub fn with_capacity(capacity: usize) -> MinPriorityQueue {
        MinPriorityQueue {
            keys: vec![f64::INFINITY; capacity],
            heap: Vec::with_capacity(capacity),
            pos: vec![NONE; capacity],
        }
    }

    pub fn len(&self) -> usize {
        self.heap.len()
    }

    pub fn is_empty(&self) -> bool {
        self.heap.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        i < self.pos.len() && self.pos[i] != NONE
    }

    /// Current key of `i`, if it is in the queue.
    pub fn key(&self, i: usize) -> Option<f64> {
        self.contains(i).then(|| self.keys[i])
    }

    /// Index with the minimal key.
    #[inline]
    pub fn argmin(&self) -> Option<usize> {
        self.heap.first().copied()
    }

    /// Removes and returns the index with the minimal key.
    pub fn remove_min(&mut self) -> Option<usize> {
        let top = *self.heap.first()?;
        self.detach(0);
        Some(top)
    }

    /// Sets the key of `i`, which must be in the queue.
    pub fn update(&mut self, i: usize, key: f64) -> Result<()> {
        if !self.contains(i) {
            return Err(Error::InvalidArgument(format!(
                "index {} is not in the priority queue",
                i
            )));
        }
        self.set(i, key);
        Ok(())
    }

    /// Adds `i` with the given key.
    pub fn insert(&mut self, i: usize, key: f64) -> Result<()> {
        if i >= self.pos.len() || self.pos[i] != NONE {
            return Err(Error::InvalidArgument(format!(
                "index {} is out of range or already queued",
                i
            )));
        }
        self.keys[i] = key;
        self.pos[i] = self.heap.len();
        self.heap.push(i);
        self.sift_up(self.heap.len() - 1);
        Ok(())
    }

    /// Removes `i` wherever it sits in the heap.
    pub fn remove(&mut self, i: usize) -> Result<()> {
        if !self.contains(i) {
            return Err(Error::InvalidArgument(format!(
                "index {} is not in the priority queue",
                i
            )));
        }
        self.detach(self.pos[i]);
        Ok(())
    }

    #[inline]
    pub(crate) fn set(&mut self, i: usize, key: f64) {
        let old = self.keys[i];
        self.keys[i] = key;
        let p = self.pos[i];
        if key < old {
            self.sift_up(p);
        } else {
            self.sift_down(p);
        }
    }

    fn detach(&mut self, p: usize) {
        let last = self.heap.len() - 1;
        let removed = self.heap[p];
        self.swap(p, last);
        self.heap.pop();
        self.pos[removed] = NONE;
        if p < self.heap.len() {
            self.sift_down(p);
            self.sift_up(p);
        }
    }

    #[inline]
    fn less(&self, a: usize, b: usize) -> bool {
        let (ka, kb) = (self.keys[a], self.keys[b]);
        ka < kb || (ka == kb && a < b)
    }

    #[inline]
    fn swap(&mut self, p: usize, q: usize) {
        self.heap.swap(p, q);
        self.pos[self.heap[p]] = p;
        self.pos[self.heap[q]] = q;
    }

    fn sift_up(&mut self, mut p: usize) {
        while p > 0 {
            let parent = (p - 1) / 2;
            if self.less(self.heap[p], self.heap[parent]) {
                self.swap(p, parent);
                p = parent;
            } else {
                break;
            }
        }
    }

    fn sift_down(&mut self, mut p: usize) {
        let len = self.heap.len();
        loop {
            let left = 2 * p + 1;
            if left >= len {
                break;
            }
            let right = left + 1;
            let child = if right < len && self.less(self.heap[right], self.heap[left]) {
                right
            } else {
                left
            };
            if self.less(self.heap[child], self.heap[p]) {
                self.swap(p, child);
                p = child;
            } else {
                break;
            }
        }
    }
}
