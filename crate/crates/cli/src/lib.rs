//! Command-line front end for spinlab: the scripting language, canonical
//! certificates and the subcommands behind the `spinlab` binary.

pub mod certificate;
pub mod commands;
pub mod script;
pub mod verify;
