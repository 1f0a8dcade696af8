/// Fixed-size bitmap of removed positions.
#[derive(Debug, Clone)]
pub(super) struct Tombstones {
    words: Vec<u64>,
    len: usize,
}

impl Tombstones {
    pub(super) fn new(len: usize) -> Self {
        Self {
            words: vec![0; len.div_ceil(64)],
            len,
        }
    }

    #[inline]
    pub(super) fn get(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    /// Sets bit `i`; returns whether it was previously clear.
    pub(super) fn set(&mut self, i: usize) -> bool {
        let word = &mut self.words[i / 64];
        let mask = 1 << (i % 64);
        let was_clear = *word & mask == 0;
        *word |= mask;
        was_clear
    }

    pub(super) fn first_clear(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != u64::MAX)
            .map(|(n, w)| n * 64 + w.trailing_ones() as usize)
            .filter(|&i| i < self.len)
    }
}
