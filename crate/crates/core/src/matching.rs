//! Maximum matching in the comparability bipartite graph of a set family.
//!
//! Vertex `u` on the left is joined to vertex `v` on the right when
//! `node_u ⊊ node_v`. Only *active* vertices take part, which lets the search
//! grow the node set one element at a time and restore earlier states from a
//! snapshot. Augmenting paths are found by iterative depth-first search in
//! index order, so results are deterministic.

const FREE: usize = usize::MAX;

#[derive(Clone, Debug)]
pub(crate) struct Snapshot {
    match_left: Vec<usize>,
    match_right: Vec<usize>,
    size: usize,
}

#[derive(Clone, Debug)]
pub(crate) struct Matcher {
    /// Strict supersets of each vertex, ascending.
    up: Vec<Vec<usize>>,
    active: Vec<bool>,
    match_left: Vec<usize>,
    match_right: Vec<usize>,
    size: usize,
    active_count: usize,
}

impl Matcher {
    /// `up[u]` lists the vertices strictly above `u`. No vertex starts active.
    pub(crate) fn new(up: Vec<Vec<usize>>) -> Self {
        let n = up.len();
        Self {
            up,
            active: vec![false; n],
            match_left: vec![FREE; n],
            match_right: vec![FREE; n],
            size: 0,
            active_count: 0,
        }
    }

    /// All vertices active, matched from scratch.
    pub(crate) fn full(up: Vec<Vec<usize>>) -> Self {
        let mut matcher = Self::new(up);
        matcher.active.fill(true);
        matcher.active_count = matcher.active.len();
        matcher.saturate();
        matcher
    }

    pub(crate) fn len(&self) -> usize {
        self.up.len()
    }

    #[cfg(test)]
    pub(crate) fn size(&self) -> usize {
        self.size
    }

    /// Active vertices minus matching size: the width of the active family.
    pub(crate) fn width(&self) -> usize {
        self.active_count - self.size
    }

    pub(crate) fn snapshot(&self) -> Snapshot {
        Snapshot {
            match_left: self.match_left.clone(),
            match_right: self.match_right.clone(),
            size: self.size,
        }
    }

    /// Undoes everything after `snapshot`, deactivating `added`.
    pub(crate) fn restore(&mut self, snapshot: Snapshot, added: usize) {
        debug_assert!(self.active[added]);
        self.active[added] = false;
        self.active_count -= 1;
        self.match_left = snapshot.match_left;
        self.match_right = snapshot.match_right;
        self.size = snapshot.size;
    }

    /// Activates `v` and re-maximizes. Any new augmenting path ends at one of
    /// the two fresh copies of `v`, so a couple of phases suffice.
    pub(crate) fn activate(&mut self, v: usize) {
        debug_assert!(!self.active[v]);
        self.active[v] = true;
        self.active_count += 1;
        let mut visited = vec![false; self.len()];
        if self.augment_from(v, &mut visited) {
            self.size += 1;
        }
        self.saturate();
    }

    /// Runs phases of augmenting-path searches until a phase finds none.
    fn saturate(&mut self) {
        let mut visited = vec![false; self.len()];
        loop {
            visited.fill(false);
            let mut grew = false;
            for u in 0..self.len() {
                if self.active[u] && self.match_left[u] == FREE && self.augment_from(u, &mut visited) {
                    self.size += 1;
                    grew = true;
                }
            }
            if !grew {
                break;
            }
        }
    }

    fn augment_from(&mut self, root: usize, visited: &mut [bool]) -> bool {
        // Frames: (left vertex, next edge index, right vertex used to descend).
        let mut stack: Vec<(usize, usize, usize)> = vec![(root, 0, FREE)];
        while let Some(frame) = stack.last_mut() {
            let (u, i) = (frame.0, frame.1);
            let Some(&v) = self.up[u].get(i) else {
                stack.pop();
                continue;
            };
            frame.1 += 1;
            if !self.active[v] || visited[v] {
                continue;
            }
            visited[v] = true;
            frame.2 = v;
            let w = self.match_right[v];
            if w == FREE {
                for &(u, _, v) in &stack {
                    self.match_left[u] = v;
                    self.match_right[v] = u;
                }
                return true;
            }
            stack.push((w, 0, FREE));
        }
        false
    }

    /// A maximum antichain of the active family (König's theorem): active `x`
    /// whose left copy is reachable from a free left vertex by an alternating
    /// path while its right copy is not.
    pub(crate) fn max_antichain(&self) -> Vec<usize> {
        let n = self.len();
        let mut left_seen = vec![false; n];
        let mut right_seen = vec![false; n];
        let mut queue: Vec<usize> = (0..n)
            .filter(|&u| self.active[u] && self.match_left[u] == FREE)
            .collect();
        for &u in &queue {
            left_seen[u] = true;
        }
        while let Some(u) = queue.pop() {
            for &v in &self.up[u] {
                if !self.active[v] || right_seen[v] {
                    continue;
                }
                right_seen[v] = true;
                let w = self.match_right[v];
                if w != FREE && !left_seen[w] {
                    left_seen[w] = true;
                    queue.push(w);
                }
            }
        }
        (0..n)
            .filter(|&x| self.active[x] && left_seen[x] && !right_seen[x])
            .collect()
    }

    /// Chains read off the matching: each starts at an active vertex with an
    /// unmatched right copy and follows matched edges upward.
    pub(crate) fn chain_cover(&self) -> Vec<Vec<usize>> {
        (0..self.len())
            .filter(|&x| self.active[x] && self.match_right[x] == FREE)
            .map(|start| {
                let mut chain = vec![start];
                let mut at = start;
                while self.match_left[at] != FREE {
                    at = self.match_left[at];
                    chain.push(at);
                }
                chain
            })
            .collect()
    }
}
