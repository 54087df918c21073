#include "nqv/qmat.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace nqv {

namespace {

using nlohmann::json;

constexpr char kMagic[5] = {'Q', 'M', 'A', 'T', '1'};

bool power_of_two(Eigen::Index d) { return d > 0 && (d & (d - 1)) == 0; }

QmatKind kind_from_string(const std::string& s) {
    if (s == "unitary") return QmatKind::Unitary;
    if (s == "hermitian") return QmatKind::Hermitian;
    if (s == "measurement") return QmatKind::Measurement;
    throw FormatError("kind: expected \"unitary\", \"hermitian\" or \"measurement\", got \"" + s +
                      "\"");
}

const char* kind_to_string(QmatKind k) {
    switch (k) {
        case QmatKind::Unitary: return "unitary";
        case QmatKind::Hermitian: return "hermitian";
        case QmatKind::Measurement: return "measurement";
    }
    return "?";
}

Matrix read_block(const json& data, std::size_t offset, Eigen::Index d) {
    Matrix m(d, d);
    for (Eigen::Index r = 0; r < d; ++r) {
        for (Eigen::Index c = 0; c < d; ++c) {
            const std::size_t idx = offset + std::size_t(r * d + c);
            const json& entry = data.at(idx);
            if (!entry.is_array() || entry.size() != 2 || !entry.at(0).is_number() ||
                !entry.at(1).is_number())
                throw FormatError("data[" + std::to_string(idx) +
                                  "]: expected a [re, im] number pair");
            m(r, c) = Complex(entry.at(0).get<double>(), entry.at(1).get<double>());
        }
    }
    return m;
}

QmatFile parse_json(const std::string& path, const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw FormatError(path + ": " + e.what());
    }
    if (!root.is_object() || !root.contains("kind") || !root.contains("shape") ||
        !root.contains("data"))
        throw FormatError(path + ": expected an object with kind, shape and data");
    if (!root["kind"].is_string()) throw FormatError(path + ": kind must be a string");

    QmatFile out;
    out.kind = kind_from_string(root["kind"].get<std::string>());
    const json& shape = root["shape"];
    const json& data = root["data"];
    if (!shape.is_array() || !data.is_array()) throw FormatError(path + ": shape and data must be arrays");

    if (out.kind == QmatKind::Measurement) {
        if (shape.size() != 3 || shape.at(0).get<Eigen::Index>() != 2)
            throw FormatError(path + ": measurement shape must be [2, d, d]");
        const Eigen::Index d = shape.at(1).get<Eigen::Index>();
        if (shape.at(2).get<Eigen::Index>() != d)
            throw FormatError(path + ": measurement blocks must be square");
        if (!power_of_two(d))
            throw FormatError(path + ": dimension " + std::to_string(d) + " is not a power of two");
        if (data.size() != std::size_t(2 * d * d))
            throw FormatError(path + ": data has " + std::to_string(data.size()) +
                              " entries, expected " + std::to_string(2 * d * d));
        out.p0 = read_block(data, 0, d);
        out.p1 = read_block(data, std::size_t(d * d), d);
    } else {
        if (shape.size() != 2 || shape.at(0).get<Eigen::Index>() != shape.at(1).get<Eigen::Index>())
            throw FormatError(path + ": shape must be [d, d]");
        const Eigen::Index d = shape.at(0).get<Eigen::Index>();
        if (!power_of_two(d))
            throw FormatError(path + ": dimension " + std::to_string(d) + " is not a power of two");
        if (data.size() != std::size_t(d * d))
            throw FormatError(path + ": data has " + std::to_string(data.size()) +
                              " entries, expected " + std::to_string(d * d));
        out.mat = read_block(data, 0, d);
    }
    return out;
}

QmatFile parse_binary(const std::string& path, const std::string& bytes) {
    // Header: magic, kind byte, u32 dimension; payload: float64 re/im pairs.
    const std::size_t header = sizeof(kMagic) + 1 + 4;
    if (bytes.size() < header) throw FormatError(path + ": truncated at byte " +
                                                 std::to_string(bytes.size()));
    const std::uint8_t kind_byte = std::uint8_t(bytes[5]);
    if (kind_byte > 2)
        throw FormatError(path + ": bad kind byte at offset 5");
    std::uint32_t d32;
    std::memcpy(&d32, bytes.data() + 6, 4);
    const Eigen::Index d = Eigen::Index(d32);
    if (!power_of_two(d)) throw FormatError(path + ": dimension " + std::to_string(d) +
                                            " is not a power of two");
    QmatFile out;
    out.kind = static_cast<QmatKind>(kind_byte);
    const std::size_t blocks = out.kind == QmatKind::Measurement ? 2 : 1;
    const std::size_t need = header + blocks * std::size_t(d * d) * 2 * sizeof(double);
    if (bytes.size() != need)
        throw FormatError(path + ": payload is " + std::to_string(bytes.size() - header) +
                          " bytes, expected " + std::to_string(need - header));
    const auto read_at = [&](std::size_t block, Eigen::Index r, Eigen::Index c) {
        const std::size_t off =
            header + (block * std::size_t(d * d) + std::size_t(r * d + c)) * 2 * sizeof(double);
        double re, im;
        std::memcpy(&re, bytes.data() + off, sizeof(double));
        std::memcpy(&im, bytes.data() + off + sizeof(double), sizeof(double));
        return Complex(re, im);
    };
    const auto block = [&](std::size_t b) {
        Matrix m(d, d);
        for (Eigen::Index r = 0; r < d; ++r)
            for (Eigen::Index c = 0; c < d; ++c) m(r, c) = read_at(b, r, c);
        return m;
    };
    if (out.kind == QmatKind::Measurement) {
        out.p0 = block(0);
        out.p1 = block(1);
    } else {
        out.mat = block(0);
    }
    return out;
}

VarTuple synthetic_vars(Eigen::Index d) {
    std::vector<std::string> names;
    for (Eigen::Index k = 1; k < d; k <<= 1) names.push_back("v" + std::to_string(names.size()));
    return VarTuple(std::move(names));
}

void validate(const std::string& path, const QmatFile& f, const Tolerances& tol) {
    switch (f.kind) {
        case QmatKind::Unitary: {
            const Matrix& u = f.mat;
            if ((u.adjoint() * u - identity(u.rows())).cwiseAbs().maxCoeff() > tol.herm)
                throw ValidationError(path + ": operator declared unitary is not unitary");
            break;
        }
        case QmatKind::Hermitian:
            if (!is_hermitian(f.mat, tol.herm))
                throw ValidationError(path + ": operator declared hermitian is not Hermitian");
            break;
        case QmatKind::Measurement:
            try {
                ProjectiveMeasurement::checked(synthetic_vars(f.p0.rows()), f.p0, f.p1, tol);
            } catch (const ValidationError& e) {
                throw ValidationError(path + ": " + e.what());
            }
            break;
    }
}

}  // namespace

QmatFile load_qmat(const std::string& path, const Tolerances& tol) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open operator file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    const std::string bytes = buf.str();

    QmatFile f = bytes.size() >= sizeof(kMagic) &&
                         std::memcmp(bytes.data(), kMagic, sizeof(kMagic)) == 0
                     ? parse_binary(path, bytes)
                     : parse_json(path, bytes);
    validate(path, f, tol);
    return f;
}

void save_qmat_json(const std::string& path, QmatKind kind, const Matrix& m) {
    if (kind == QmatKind::Measurement)
        throw ValidationError("save_qmat_json writes single operators, not measurements");
    json root;
    root["kind"] = kind_to_string(kind);
    root["shape"] = {m.rows(), m.cols()};
    json data = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c)
            data.push_back({m(r, c).real(), m(r, c).imag()});
    root["data"] = std::move(data);
    std::ofstream out(path);
    if (!out) throw FormatError("cannot write operator file '" + path + "'");
    out << root.dump(1) << "\n";
}

void save_qmat_binary(const std::string& path, const QmatFile& file) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FormatError("cannot write operator file '" + path + "'");
    out.write(kMagic, sizeof(kMagic));
    const char kind_byte = char(static_cast<int>(file.kind));
    out.put(kind_byte);
    const Matrix& first = file.kind == QmatKind::Measurement ? file.p0 : file.mat;
    const std::uint32_t d32 = std::uint32_t(first.rows());
    out.write(reinterpret_cast<const char*>(&d32), 4);
    const auto write_block = [&](const Matrix& m) {
        for (Eigen::Index r = 0; r < m.rows(); ++r)
            for (Eigen::Index c = 0; c < m.cols(); ++c) {
                const double re = m(r, c).real(), im = m(r, c).imag();
                out.write(reinterpret_cast<const char*>(&re), sizeof(double));
                out.write(reinterpret_cast<const char*>(&im), sizeof(double));
            }
    };
    write_block(first);
    if (file.kind == QmatKind::Measurement) write_block(file.p1);
}

OperatorDef to_operator_def(QmatFile file) {
    OperatorDef def;
    if (file.kind == QmatKind::Measurement)
        def.meas = std::make_pair(std::move(file.p0), std::move(file.p1));
    else
        def.mat = std::move(file.mat);
    return def;
}

}  // namespace nqv
