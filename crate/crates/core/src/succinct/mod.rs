//! Bit-level building blocks: rank/select bitvectors, constant-time
//! initializable arrays and range-minimum/maximum indexes.

mod bitvector;
mod init_array;
mod rmq;

pub use bitvector::BitVector;
pub use init_array::InitializableArray;
pub use rmq::{RmqIndex, RmqMode};

/// Reports how many bits a structure occupies in memory.
pub trait SpaceUsage {
    fn size_in_bits(&self) -> usize;
}

impl SpaceUsage for Vec<u32> {
    fn size_in_bits(&self) -> usize {
        self.len() * 32
    }
}
