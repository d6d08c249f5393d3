//! File formats: IDX image/label tensors, data-space JSON, and actor tables.

pub mod idx;
pub mod space;
