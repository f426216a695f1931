fn main() {
    std::process::exit(oblong::cli::run(std::env::args_os()));
}
