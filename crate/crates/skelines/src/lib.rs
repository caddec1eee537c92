//! File formats, export and command-line front end for `skelines-core`.
//!
//! ```no_run
//! use skelines::{io, export};
//! use skelines_core::{detect_from_gray, GrayOptions};
//!
//! let img = io::load_gray_path("glyph.png".as_ref()).unwrap();
//! let result = detect_from_gray(&img, &GrayOptions::default(), &skelines::SystemClock::new()).unwrap();
//! std::fs::write("glyph.json", export::to_json(&result)).unwrap();
//! ```

pub mod cli;
mod clock;
pub mod export;
pub mod io;

pub use clock::SystemClock;
pub use skelines_core as core;
