#include "aamr/problem_io.hpp"

#include <json.hpp>

#include <charconv>
#include <fstream>
#include <sstream>

namespace aamr {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& where, const std::string& what)
{
    throw ParseError(where + ": " + what);
}

const json& field(const json& obj, const char* name, const std::string& where)
{
    const auto it = obj.find(name);
    if (it == obj.end()) {
        fail(where.empty() ? std::string(name) : where + "." + name, "missing field");
    }
    return *it;
}

double read_number(const json& value, const std::string& where)
{
    if (!value.is_number()) {
        fail(where, "expected a number");
    }
    return value.get<double>();
}

Vector read_vector(const json& value, Index dim, const std::string& where)
{
    if (!value.is_array()) {
        fail(where, "expected an array of numbers");
    }
    if (static_cast<Index>(value.size()) != dim) {
        fail(where, "expected " + std::to_string(dim) + " entries, got " + std::to_string(value.size()));
    }
    Vector v(dim);
    for (Index i = 0; i < dim; ++i) {
        v(i) = read_number(value[static_cast<std::size_t>(i)], where + "[" + std::to_string(i) + "]");
    }
    return v;
}

// Row-major n x d matrix: exactly `dim` rows of a common length d.
Matrix read_basis(const json& value, Index dim, const std::string& where)
{
    if (!value.is_array()) {
        fail(where, "expected an array of rows");
    }
    if (static_cast<Index>(value.size()) != dim) {
        fail(where, "expected " + std::to_string(dim) + " rows, got " + std::to_string(value.size()));
    }
    Index cols = -1;
    Matrix m;
    for (Index i = 0; i < dim; ++i) {
        const auto& row = value[static_cast<std::size_t>(i)];
        const std::string row_where = where + "[" + std::to_string(i) + "]";
        if (!row.is_array()) {
            fail(row_where, "expected an array of numbers");
        }
        if (cols < 0) {
            cols = static_cast<Index>(row.size());
            if (cols > dim) {
                fail(row_where, "more columns than the ambient dimension");
            }
            m.resize(dim, cols);
        }
        m.row(i) = read_vector(row, cols, row_where).transpose();
    }
    return m;
}

LinearSubspace read_subspace(const json& obj, Index dim, const std::string& where)
{
    const Matrix basis = read_basis(field(obj, "basis", where), dim, where + ".basis");
    if (!basis.allFinite()) {
        fail(where + ".basis", "entries must be finite");
    }
    return LinearSubspace::from_spanning(basis);
}

SetPtr read_set(const json& obj, Index dim, const std::string& where)
{
    if (!obj.is_object()) {
        fail(where, "expected an object");
    }
    const json& type_field = field(obj, "type", where);
    if (!type_field.is_string()) {
        fail(where + ".type", "expected a string");
    }
    const std::string type = type_field.get<std::string>();

    try {
        if (type == "ball") {
            const Vector center = read_vector(field(obj, "center", where), dim, where + ".center");
            const double radius = read_number(field(obj, "radius", where), where + ".radius");
            if (!(radius >= 0.0)) {
                fail(where + ".radius", "must be nonnegative");
            }
            return std::make_shared<Ball>(center, radius);
        }
        if (type == "subspace") {
            return std::make_shared<LinearSubspace>(read_subspace(obj, dim, where));
        }
        if (type == "affine") {
            const Vector offset = read_vector(field(obj, "offset", where), dim, where + ".offset");
            return std::make_shared<AffineSubspace>(offset, read_subspace(obj, dim, where));
        }
        if (type == "halfspace" || type == "hyperplane") {
            const Vector a = read_vector(field(obj, "a", where), dim, where + ".a");
            if (a.norm() == 0.0) {
                fail(where + ".a", "normal must be nonzero");
            }
            const double b = read_number(field(obj, "b", where), where + ".b");
            if (type == "halfspace") {
                return std::make_shared<Halfspace>(a, b);
            }
            return std::make_shared<Hyperplane>(a, b);
        }
        if (type == "box") {
            const Vector lower = read_vector(field(obj, "lower", where), dim, where + ".lower");
            const Vector upper = read_vector(field(obj, "upper", where), dim, where + ".upper");
            for (Index i = 0; i < dim; ++i) {
                if (!(lower(i) <= upper(i))) {
                    fail(where + ".lower[" + std::to_string(i) + "]", "exceeds the matching upper bound");
                }
            }
            return std::make_shared<Box>(lower, upper);
        }
    } catch (const ParseError&) {
        throw;
    } catch (const Error& e) {
        fail(where, e.what());
    }
    fail(where + ".type", "unknown set type \"" + type + "\"");
}

} // namespace

Problem parse_problem(std::string_view text)
{
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
    if (!doc.is_object()) {
        fail("document", "expected an object");
    }

    const json& dim_field = field(doc, "dim", "");
    if (!dim_field.is_number_integer() || dim_field.get<long long>() < 1) {
        fail("dim", "expected a positive integer");
    }
    Problem problem;
    problem.dim = static_cast<Index>(dim_field.get<long long>());

    const json& sets = field(doc, "sets", "");
    if (!sets.is_array() || sets.empty()) {
        fail("sets", "expected a nonempty array");
    }
    for (std::size_t i = 0; i < sets.size(); ++i) {
        problem.sets.push_back(read_set(sets[i], problem.dim, "sets[" + std::to_string(i) + "]"));
    }
    return problem;
}

Problem load_problem(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ParseError(path.string() + ": cannot open file");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_problem(buffer.str());
}

Vector parse_vector(std::string_view text)
{
    std::vector<double> values;
    std::size_t pos = 0;
    while (true) {
        const std::size_t comma = text.find(',', pos);
        std::string_view token = text.substr(pos, comma == std::string_view::npos ? text.npos : comma - pos);
        while (!token.empty() && token.front() == ' ') {
            token.remove_prefix(1);
        }
        while (!token.empty() && token.back() == ' ') {
            token.remove_suffix(1);
        }
        if (!token.empty() && token.front() == '+') {
            token.remove_prefix(1);
        }
        double value = 0.0;
        const auto [end, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
        if (token.empty() || ec != std::errc() || end != token.data() + token.size()) {
            throw ParseError("invalid number \"" + std::string(token) + "\" in vector \"" + std::string(text) + "\"");
        }
        values.push_back(value);
        if (comma == std::string_view::npos) {
            break;
        }
        pos = comma + 1;
    }
    return Eigen::Map<const Vector>(values.data(), static_cast<Index>(values.size()));
}

std::string format_number(double x)
{
    char buf[64];
    const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
    return ec == std::errc() ? std::string(buf, end) : std::string("nan");
}

std::string format_fixed(double x, int decimals)
{
    char buf[128];
    const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::fixed, decimals);
    return ec == std::errc() ? std::string(buf, end) : std::string("nan");
}

} // namespace aamr
