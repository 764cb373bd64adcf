fn main() -> std::process::ExitCode {
    horn_dmod::cli::main()
}
