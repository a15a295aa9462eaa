use std::panic;

fn main() {
    let hook = panic::take_hook();
    panic::set_hook(Box::new(move |info| {
        eprintln!("akh: internal error");
        hook(info);
    }));
    let code = panic::catch_unwind(|| akh::cli::run(std::env::args_os())).unwrap_or(4);
    std::process::exit(code);
}
