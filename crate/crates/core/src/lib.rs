pub mod catalog;
pub mod error;
pub mod fuzzy;
pub mod hyers;
pub mod scenario;
pub mod space;
pub mod verify;
