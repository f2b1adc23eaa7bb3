//! Ordered set of live cluster slots with O(1) removal, as a doubly linked
//! list over slot indices.

pub(crate) const NONE: usize = usize::MAX;

#[derive(Clone, Debug)]
pub(crate) struct ActiveList {
    head: usize,
    succ: Vec<usize>,
    pred: Vec<usize>,
    live: Vec<bool>,
    len: usize,
}

impl ActiveList {
    /// Slots `0..n` live in increasing order, room for `capacity` slots.
    pub(crate) fn with_capacity(n: usize, capacity: usize) -> ActiveList {
        debug_assert!(n <= capacity);
        let mut succ = vec![NONE; capacity];
        let mut pred = vec![NONE; capacity];
        for i in 0..n {
            succ[i] = if i + 1 < n { i + 1 } else { NONE };
            pred[i] = if i > 0 { i - 1 } else { NONE };
        }
        let mut live = vec![false; capacity];
        live[..n].fill(true);
        ActiveList {
            head: if n > 0 { 0 } else { NONE },
            succ,
            pred,
            live,
            len: n,
        }
    }

    pub(crate) fn new(n: usize) -> ActiveList {
        ActiveList::with_capacity(n, n)
    }

    #[inline]
    pub(crate) fn first(&self) -> usize {
        self.head
    }

    #[inline]
    pub(crate) fn succ(&self, i: usize) -> usize {
        self.succ[i]
    }

    #[inline]
    pub(crate) fn contains(&self, i: usize) -> bool {
        i < self.live.len() && self.live[i]
    }

    #[inline]
    pub(crate) fn len(&self) -> usize {
        self.len
    }

    pub(crate) fn remove(&mut self, i: usize) {
        debug_assert!(self.live[i]);
        let (p, s) = (self.pred[i], self.succ[i]);
        if p == NONE {
            self.head = s;
        } else {
            self.succ[p] = s;
        }
        if s != NONE {
            self.pred[s] = p;
        }
        self.live[i] = false;
        self.len -= 1;
    }

    pub(crate) fn push_front(&mut self, i: usize) {
        debug_assert!(!self.live[i]);
        self.succ[i] = self.head;
        self.pred[i] = NONE;
        if self.head != NONE {
            self.pred[self.head] = i;
        }
        self.head = i;
        self.live[i] = true;
        self.len += 1;
    }

    /// Live slots in list order.
    pub(crate) fn iter(&self) -> Iter<'_> {
        Iter {
            list: self,
            next: self.head,
        }
    }

    /// Live slots strictly after `i` in list order.
    pub(crate) fn after(&self, i: usize) -> Iter<'_> {
        Iter {
            list: self,
            next: self.succ[i],
        }
    }
}

pub(crate) struct Iter<'a> {
    list: &'a ActiveList,
    next: usize,
}

impl Iterator for Iter<'_> {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        if self.next == NONE {
            return None;
        }
        let cur = self.next;
        self.next = self.list.succ[cur];
        Some(cur)
    }
}
