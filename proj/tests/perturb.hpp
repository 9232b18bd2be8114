#pragma once

#include <string>
#include <vector>

#include "gext/io.hpp"

namespace gext::test {

/// A certificate with exactly one field or matrix entry changed, and a label saying where.
struct Perturbed {
    std::string where;
    Json certificate;
    bool structural = false;  // a move flag or index rather than a ring entry
};

inline std::vector<Perturbed> perturb_matrix_field(const Json& cert, const std::vector<std::string>& path, const GroupPtr& g) {
    std::vector<Perturbed> out;
    const Json* node = &cert;
    for (const auto& p : path) node = p.front() >= '0' && p.front() <= '9' ? &(*node)[std::stoul(p)] : &node->at(p);
    const MatGRPoly m = parse_matrix(node->get<std::string>(), g);
    std::string label;
    for (const auto& p : path) label += "/" + p;
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) {
            MatGRPoly bumped = m;
            bumped(i, j) += gr_poly(GRElem::scalar(g, 1));
            Json c = cert;
            Json* target = &c;
            for (const auto& p : path) target = p.front() >= '0' && p.front() <= '9' ? &(*target)[std::stoul(p)] : &target->at(p);
            *target = to_string(bumped);
            out.push_back({label + "(" + std::to_string(i) + "," + std::to_string(j) + ")", c});
        }
    return out;
}

/// Every single-entry perturbation of a chain, sse or se certificate.
inline std::vector<Perturbed> perturbations(const Json& cert) {
    const std::string type = cert.at("type").get<std::string>();
    const GroupPtr g = parse_group(cert.at("group").get<std::string>());
    std::vector<Perturbed> out;
    auto add = [&](std::vector<Perturbed> more) { out.insert(out.end(), more.begin(), more.end()); };
    if (type == "chain") {
        add(perturb_matrix_field(cert, {"start"}, g));
        add(perturb_matrix_field(cert, {"end"}, g));
        const std::size_t size = parse_matrix(cert.at("end").get<std::string>(), g).rows();
        for (std::size_t k = 0; k < cert.at("moves").size(); ++k) {
            const std::string at = "/moves/" + std::to_string(k);
            Json c = cert;
            Json& mv = c["moves"][k];
            mv["r"] = to_string(parse_poly(mv["r"].get<std::string>(), g) + gr_poly(GRElem::scalar(g, 1)));
            out.push_back({at + "/r", c});
            c = cert;
            c["moves"][k]["side"] = cert["moves"][k]["side"] == "left" ? "right" : "left";
            out.push_back({at + "/side", c, true});
            c = cert;
            c["moves"][k]["inverse"] = !cert["moves"][k]["inverse"].get<bool>();
            out.push_back({at + "/inverse", c, true});
            for (const char* idx : {"i", "j"}) {
                c = cert;
                c["moves"][k][idx] = (cert["moves"][k][idx].get<std::size_t>() + 1) % size;
                out.push_back({at + "/" + idx, c, true});
            }
        }
    } else if (type == "sse") {
        add(perturb_matrix_field(cert, {"a"}, g));
        add(perturb_matrix_field(cert, {"b"}, g));
        for (std::size_t k = 0; k < cert.at("steps").size(); ++k) {
            add(perturb_matrix_field(cert, {"steps", std::to_string(k), "r"}, g));
            add(perturb_matrix_field(cert, {"steps", std::to_string(k), "s"}, g));
        }
    } else if (type == "se") {
        for (const char* f : {"a", "b", "r", "s"}) add(perturb_matrix_field(cert, {f}, g));
        Json c = cert;
        c["lag"] = cert["lag"].get<unsigned long>() + 1;
        out.push_back({"/lag", c});
    }
    return out;
}

/// Replays a chain certificate by explicit multiplication with I +- r e_ij and reports
/// whether it lands on the claimed end; used to confirm that an accepted perturbation is genuine.
inline bool chain_reaches_end(const Json& cert) {
    const GroupPtr g = parse_group(cert.at("group").get<std::string>());
    MatGRPoly s = parse_matrix(cert.at("start").get<std::string>(), g);
    const GRPoly zero = gr_poly(GRElem(g));
    for (const auto& mv : cert.at("moves")) {
        if (!mv.at("stabilize_to").is_null()) {
            const std::size_t to = mv.at("stabilize_to").get<std::size_t>();
            MatGRPoly p = MatGRPoly::identity(std::max(to, s.rows()), zero);
            for (std::size_t i = 0; i < s.rows(); ++i)
                for (std::size_t j = 0; j < s.cols(); ++j) p(i, j) = s(i, j);
            s = p;
        }
        const std::size_t i = mv.at("i").get<std::size_t>(), j = mv.at("j").get<std::size_t>();
        if (i == j || i >= s.rows() || j >= s.rows()) return false;
        MatGRPoly e = MatGRPoly::identity(s.rows(), zero);
        const GRPoly r = parse_poly(mv.at("r").get<std::string>(), g);
        e(i, j) = mv.at("inverse").get<bool>() ? -r : r;
        s = mv.at("side") == "left" ? e * s : s * e;
    }
    MatGRPoly end = parse_matrix(cert.at("end").get<std::string>(), g);
    if (end.rows() < s.rows()) {
        MatGRPoly p = MatGRPoly::identity(s.rows(), zero);
        for (std::size_t a = 0; a < end.rows(); ++a)
            for (std::size_t b = 0; b < end.cols(); ++b) p(a, b) = end(a, b);
        end = p;
    }
    return s == end;
}

/// The verify command matching a certificate type.
inline std::string verifier_for(const Json& cert) {
    const std::string type = cert.at("type").get<std::string>();
    return type == "chain" ? "verify-chain" : type == "sse" ? "verify-sse" : "verify-se";
}

}  // namespace gext::test
