fn main() -> std::process::ExitCode {
    tracegeo::cli::main()
}
