#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "nqv/pipeline.hpp"

#ifndef NQV_CORPUS_DIR
#define NQV_CORPUS_DIR "corpus"
#endif

int main(int argc, char** argv) {
    CLI::App app{"certifying verifier for nondeterministic quantum programs"};
    app.require_subcommand(1);

    std::string file;
    std::string mode = "partial";
    nqv::VerifyOptions opts;

    CLI::App* verify = app.add_subcommand("verify", "verify a declaration file");
    verify->add_option("file", file, "declaration file (.nqpv)")->required();
    verify->add_option("--epsilon", opts.epsilon, "acceptance band of the order engine");
    verify->add_option("--max-iters", opts.max_iters, "per-target optimization budget");
    verify->add_option("--oracle-depth", opts.oracle_depth,
                       "also cross-check accepted formulas on sampled states, unrolling loops "
                       "this many rounds");
    verify->add_option("--save-dir", opts.save_dir, "write generated predicates here as qmat files");
    verify->add_option("--seed", opts.seed, "sampling seed for the cross-check");
    verify->add_option("--mode", mode, "partial or total; total rejects loops")
        ->check(CLI::IsMember({"partial", "total"}));

    std::string corpus_dir = NQV_CORPUS_DIR;
    CLI::App* corpus = app.add_subcommand("corpus", "run the bundled case studies");
    corpus->add_option("--dir", corpus_dir, "corpus directory");

    CLI11_PARSE(app, argc, argv);

    if (verify->parsed()) {
        opts.mode = mode == "total" ? nqv::Mode::Total : nqv::Mode::Partial;
        nqv::VerifyResult res = nqv::verify_file(file, opts);
        std::cout << res.report;
        return int(res.outcome);
    }
    return nqv::run_corpus(corpus_dir, std::cout);
}
