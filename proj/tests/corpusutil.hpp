#pragma once
// Loading helpers for the shipped corpus files, shared by the suites that
// exercise whole programs. ACCEPT_CORPUS_DIR comes from the build.

#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "nqv/env.hpp"
#include "nqv/parser.hpp"
#include "nqv/qmat.hpp"

namespace corpusutil {

inline std::filesystem::path dir() { return std::filesystem::path(ACCEPT_CORPUS_DIR); }

inline std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in.good()) throw std::runtime_error("cannot open " + p.string());
    std::ostringstream oss;
    oss << in.rdbuf();
    return oss.str();
}

// A corpus file with its loads resolved relative to the corpus directory.
struct LoadedFile {
    nqv::OperatorEnv env = nqv::OperatorEnv::with_builtins();
    std::vector<nqv::ProofDecl> proofs;
};

inline LoadedFile load(const std::string& name) {
    LoadedFile out;
    const nqv::DeclarationFile f = nqv::parse(read_file(dir() / name));
    for (const auto& d : f.decls) {
        if (const auto* ld = std::get_if<nqv::LoadDecl>(&d))
            out.env.define(ld->name,
                           nqv::to_operator_def(nqv::load_qmat((dir() / ld->path).string())),
                           ld->loc);
        else if (const auto* proof = std::get_if<nqv::ProofDecl>(&d))
            out.proofs.push_back(*proof);
    }
    return out;
}

}  // namespace corpusutil
