#pragma once

#include <string>
#include <utility>

#include "nqv/env.hpp"
#include "nqv/linalg.hpp"

namespace nqv {

enum class QmatKind { Unitary, Hermitian, Measurement };

// Contents of a qmat operator file: one matrix, or a projector pair for
// measurements.
struct QmatFile {
    QmatKind kind;
    Matrix mat;           // unitary/hermitian
    Matrix p0, p1;        // measurement blocks
};

// Reads either encoding, sniffing the binary magic first:
//  - JSON: {"kind": "unitary"|"hermitian"|"measurement",
//           "shape": [d,d] | [2,d,d],
//           "data": [[re,im], ...]}   (row major; measurement blocks P0, P1
//                                      concatenated)
//  - binary: "QMAT1", kind byte (0/1/2), u32 dimension, float64 re/im pairs,
//    all little endian.
// Malformed structure raises FormatError; data that contradicts the declared
// kind raises ValidationError.
QmatFile load_qmat(const std::string& path, const Tolerances& tol = {});

void save_qmat_json(const std::string& path, QmatKind kind, const Matrix& m);
void save_qmat_binary(const std::string& path, const QmatFile& file);

OperatorDef to_operator_def(QmatFile file);

}  // namespace nqv
