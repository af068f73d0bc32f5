#include "registry_parse.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>
#include <cstdlib>

#include "bsdelab/errors.hpp"

namespace bsdelab::detail {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

double parse_number(std::string_view s) {
    s = trim(s);
    const std::string buf(s);
    char* end = nullptr;
    const double v = std::strtod(buf.c_str(), &end);
    if (buf.empty() || end != buf.c_str() + buf.size())
        throw PreconditionError("not a number: '" + buf + "'");
    return v;
}

Call parse_call(std::string_view spec) {
    spec = trim(spec);
    Call call;
    const auto open = spec.find('(');
    if (open == std::string_view::npos) {
        call.name = std::string(spec);
        return call;
    }
    if (spec.back() != ')') throw PreconditionError("unbalanced parentheses in '" + std::string(spec) + "'");
    call.name = std::string(trim(spec.substr(0, open)));
    std::string_view inner = spec.substr(open + 1, spec.size() - open - 2);
    if (trim(inner).empty()) return call;
    while (true) {
        const auto comma = inner.find(',');
        call.args.push_back(parse_number(inner.substr(0, comma)));
        if (comma == std::string_view::npos) break;
        inner.remove_prefix(comma + 1);
    }
    return call;
}

std::string format_number(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

}  // namespace bsdelab::detail
