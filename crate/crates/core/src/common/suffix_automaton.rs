/// Suffix automaton of a byte string, with the end position of the first
/// occurrence recorded per state.
/// Reference: https://cp-algorithms.com/string/suffix-automaton.html
#[derive(Clone, Debug)]
pub struct SuffixAutomaton {
    states: Vec<State>,
    last: usize,
}

#[derive(Clone, Debug)]
struct State {
    len: usize,
    link: Option<usize>,
    /// Sorted by symbol; alphabets here are tiny.
    next: Vec<(u8, usize)>,
    first_end: usize,
}

impl State {
    fn get(&self, c: u8) -> Option<usize> {
        self.next
            .binary_search_by_key(&c, |&(s, _)| s)
            .ok()
            .map(|i| self.next[i].1)
    }

    fn set(&mut self, c: u8, to: usize) {
        match self.next.binary_search_by_key(&c, |&(s, _)| s) {
            Ok(i) => self.next[i].1 = to,
            Err(i) => self.next.insert(i, (c, to)),
        }
    }
}

impl SuffixAutomaton {
    pub fn new(text: &[u8]) -> Self {
        let mut sa = SuffixAutomaton {
            states: Vec::with_capacity(2 * text.len() + 1),
            last: 0,
        };
        sa.states.push(State {
            len: 0,
            link: None,
            next: Vec::new(),
            first_end: 0,
        });
        for (pos, &c) in text.iter().enumerate() {
            sa.extend(c, pos);
        }
        sa
    }

    fn extend(&mut self, c: u8, pos: usize) {
        let cur = self.states.len();
        self.states.push(State {
            len: self.states[self.last].len + 1,
            link: None,
            next: Vec::new(),
            first_end: pos,
        });
        let mut p = Some(self.last);
        while let Some(v) = p {
            if self.states[v].get(c).is_some() {
                break;
            }
            self.states[v].set(c, cur);
            p = self.states[v].link;
        }
        match p {
            None => self.states[cur].link = Some(0),
            Some(v) => {
                let q = self.states[v].get(c).expect("loop stopped on an existing edge");
                if self.states[v].len + 1 == self.states[q].len {
                    self.states[cur].link = Some(q);
                } else {
                    let clone = self.states.len();
                    let mut cloned = self.states[q].clone();
                    cloned.len = self.states[v].len + 1;
                    self.states.push(cloned);
                    let mut w = Some(v);
                    while let Some(u) = w {
                        if self.states[u].get(c) != Some(q) {
                            break;
                        }
                        self.states[u].set(c, clone);
                        w = self.states[u].link;
                    }
                    self.states[q].link = Some(clone);
                    self.states[cur].link = Some(clone);
                }
            }
        }
        self.last = cur;
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    /// Streams `other` through the automaton. For every end position `j` in
    /// `other` yields `(j, l, first_end)`: `l` is the length of the longest
    /// suffix of `other[..=j]` occurring in the indexed text, and `first_end`
    /// is where its first occurrence there ends (meaningless when `l = 0`).
    pub fn matches<'a>(&'a self, other: &'a [u8]) -> impl Iterator<Item = (usize, usize, usize)> + 'a {
        let mut v = 0usize;
        let mut l = 0usize;
        other.iter().enumerate().map(move |(j, &c)| {
            loop {
                if let Some(to) = self.states[v].get(c) {
                    v = to;
                    l += 1;
                    break;
                }
                match self.states[v].link {
                    Some(link) => {
                        v = link;
                        l = self.states[v].len;
                    }
                    None => {
                        l = 0;
                        break;
                    }
                }
            }
            (j, l, self.states[v].first_end)
        })
    }
}
