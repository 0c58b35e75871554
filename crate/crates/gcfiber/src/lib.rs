pub mod commands;
pub mod document;
pub mod error;
pub mod output;
pub mod report;
