//! File formats and seeded instance generation.

mod format;
mod random;

pub use format::{
    read_3partition, read_instance, read_instance_doc, read_partition, read_reduced, read_schedule,
    reduction_comments, write_3partition, write_instance, write_instance_doc, write_partition,
    write_reduced, write_schedule, InstanceDoc, INSTANCE_HEADER, PARTITION_HEADER, SCHEDULE_HEADER,
    THREE_PARTITION_HEADER,
};
pub use random::{gen_random, gen_random_doc, gen_yes_3partition, RandomSpec};
