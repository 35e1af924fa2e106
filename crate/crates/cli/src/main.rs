fn main() {
    std::process::exit(rtf_cli::run(std::env::args_os()));
}
