fn main() {
    std::process::exit(modview_cli::run(std::env::args_os()));
}
