//! Global allocator that tracks live heap bytes and exits with status 4 once
//! a configured cap is exceeded.

use std::alloc::{GlobalAlloc, Layout, System};
use std::io::Write;
use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};

pub const EXIT_MEMORY: i32 = 4;

pub struct Capped {
    live: AtomicUsize,
    cap: AtomicUsize,
    tripped: AtomicBool,
}

impl Capped {
    pub const fn new() -> Capped {
        Capped { live: AtomicUsize::new(0), cap: AtomicUsize::new(0), tripped: AtomicBool::new(false) }
    }

    /// Zero disables the cap.
    pub fn set_cap(&self, bytes: usize) {
        self.cap.store(bytes, Ordering::SeqCst);
    }

    fn grow(&self, by: usize) {
        let live = self.live.fetch_add(by, Ordering::Relaxed) + by;
        let cap = self.cap.load(Ordering::Relaxed);
        if cap != 0 && live > cap && !self.tripped.swap(true, Ordering::SeqCst) {
            let _ = std::io::stderr().write_all(b"error: memory cap from SEMIFACT_MAX_MEM exceeded\n");
            std::process::exit(EXIT_MEMORY);
        }
    }
}

unsafe impl GlobalAlloc for Capped {
    unsafe fn alloc(&self, layout: Layout) -> *mut u8 {
        let p = System.alloc(layout);
        if !p.is_null() {
            self.grow(layout.size());
        }
        p
    }

    unsafe fn dealloc(&self, ptr: *mut u8, layout: Layout) {
        System.dealloc(ptr, layout);
        self.live.fetch_sub(layout.size(), Ordering::Relaxed);
    }

    unsafe fn alloc_zeroed(&self, layout: Layout) -> *mut u8 {
        let p = System.alloc_zeroed(layout);
        if !p.is_null() {
            self.grow(layout.size());
        }
        p
    }

    unsafe fn realloc(&self, ptr: *mut u8, layout: Layout, new_size: usize) -> *mut u8 {
        let p = System.realloc(ptr, layout, new_size);
        if !p.is_null() {
            if new_size >= layout.size() {
                self.grow(new_size - layout.size());
            } else {
                self.live.fetch_sub(layout.size() - new_size, Ordering::Relaxed);
            }
        }
        p
    }
}

/// Parses sizes like `65536`, `512K`, `64M`, `2G`.
pub fn parse_size(s: &str) -> Option<usize> {
    let s = s.trim();
    let (digits, mult) = match s.char_indices().last()? {
        (i, 'k' | 'K') => (&s[..i], 1usize << 10),
        (i, 'm' | 'M') => (&s[..i], 1 << 20),
        (i, 'g' | 'G') => (&s[..i], 1 << 30),
        _ => (s, 1),
    };
    digits.trim().parse::<usize>().ok()?.checked_mul(mult)
}
