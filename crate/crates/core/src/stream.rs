//! Byte sources feeding every sampler in the crate.

use rand_core::RngCore;

/// An unbounded source of bytes. Samplers are deterministic functions of the
/// bytes they consume.
pub trait ByteStream {
    fn fill(&mut self, dst: &mut [u8]);

    fn next_byte(&mut self) -> u8 {
        let mut b = [0u8; 1];
        self.fill(&mut b);
        b[0]
    }
}

impl<S: ByteStream + ?Sized> ByteStream for &mut S {
    fn fill(&mut self, dst: &mut [u8]) {
        (**self).fill(dst)
    }
}

/// Adapts any `rand_core` generator into a [`ByteStream`].
#[derive(Clone, Debug)]
pub struct RngStream<R>(pub R);

impl<R: RngCore> ByteStream for RngStream<R> {
    fn fill(&mut self, dst: &mut [u8]) {
        self.0.fill_bytes(dst)
    }
}

/// Reads bits LSB-first from a byte stream; leftover bits of the last byte
/// are discarded when the reader is dropped.
pub(crate) struct BitReader<'a, S: ByteStream + ?Sized> {
    stream: &'a mut S,
    cur: u8,
    left: u32,
}

impl<'a, S: ByteStream + ?Sized> BitReader<'a, S> {
    pub(crate) fn new(stream: &'a mut S) -> Self {
        BitReader { stream, cur: 0, left: 0 }
    }

    pub(crate) fn bit(&mut self) -> u64 {
        if self.left == 0 {
            self.cur = self.stream.next_byte();
            self.left = 8;
        }
        let b = (self.cur & 1) as u64;
        self.cur >>= 1;
        self.left -= 1;
        b
    }
}
