#include "cptc/pattern.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace cptc {

namespace {

void validateBounds(const Index& x, const std::vector<int>& dims) {
    if (x.size() != dims.size()) {
        throw BoundsError("tuple arity does not match tensor order");
    }
    for (size_t i = 0; i < x.size(); ++i) {
        if (x[i] < 0 || x[i] >= dims[i]) {
            throw BoundsError("coordinate " + std::to_string(x[i]) + " out of range [0," +
                              std::to_string(dims[i]) + ") in mode " + std::to_string(i));
        }
    }
}

}  // namespace

SamplingPattern::SamplingPattern(std::vector<int> d, std::vector<Index> entries)
    : dims(std::move(d)), observed(std::move(entries)) {
    if (dims.size() < 2) throw BoundsError("tensor order must be at least 2");
    for (int n : dims) {
        if (n < 1) throw BoundsError("every dimension size must be positive");
    }
    for (const Index& x : observed) validateBounds(x, dims);
    std::sort(observed.begin(), observed.end());
    if (std::adjacent_find(observed.begin(), observed.end()) != observed.end()) {
        throw DuplicateEntry("duplicate observed entry");
    }
}

long long SamplingPattern::cellCount() const {
    long long c = 1;
    for (int n : dims) c *= n;
    return c;
}

bool SamplingPattern::isObserved(const Index& x) const {
    return std::binary_search(observed.begin(), observed.end(), x);
}

namespace {

long long encodeMixedRadix(const Index& x, const std::vector<int>& modes,
                           const std::vector<int>& dims) {
    long long code = 0;
    for (int m : modes) code = code * dims[m] + x[m];
    return code;
}

Index decodeMixedRadix(long long code, const std::vector<int>& modes,
                       const std::vector<int>& dims) {
    Index x(modes.size());
    for (size_t i = modes.size(); i-- > 0;) {
        int n = dims[modes[i]];
        x[i] = static_cast<int>(code % n);
        code /= n;
    }
    return x;
}

}  // namespace

long long UnfoldingMatrix::encodeRow(const Index& x) const { return encodeMixedRadix(x, rowModes, dims); }
long long UnfoldingMatrix::encodeCol(const Index& x) const { return encodeMixedRadix(x, colModes, dims); }
Index UnfoldingMatrix::decodeRow(long long row) const { return decodeMixedRadix(row, rowModes, dims); }
Index UnfoldingMatrix::decodeCol(long long col) const { return decodeMixedRadix(col, colModes, dims); }

UnfoldingMatrix unfold(const SamplingPattern& pattern, const IndexSet& I) {
    const int d = pattern.order();
    if (I.modes.empty()) throw EmptyIndexSet();
    std::vector<bool> inI(d, false);
    for (int m : I.modes) {
        if (m < 0 || m >= d) throw ModeOutOfRange(m, d);
        if (inI[m]) throw BoundsError("repeated mode in index set");
        inI[m] = true;
    }
    if (static_cast<int>(I.modes.size()) == d) throw FullIndexSet();

    UnfoldingMatrix u;
    u.dims = pattern.dims;
    u.rowModes = I.modes;
    std::sort(u.rowModes.begin(), u.rowModes.end());
    for (int m = 0; m < d; ++m) {
        if (!inI[m]) u.colModes.push_back(m);
    }
    u.rows = 1;
    for (int m : u.rowModes) u.rows *= pattern.dims[m];
    u.cols = 1;
    for (int m : u.colModes) u.cols *= pattern.dims[m];
    u.nonzeros.reserve(pattern.observed.size());
    for (const Index& x : pattern.observed) {
        u.nonzeros.emplace_back(u.encodeRow(x), u.encodeCol(x));
    }
    std::sort(u.nonzeros.begin(), u.nonzeros.end());
    return u;
}

UnfoldingMatrix matricization(const SamplingPattern& pattern, int mode) {
    if (mode < 0 || mode >= pattern.order()) throw ModeOutOfRange(mode, pattern.order());
    return unfold(pattern, IndexSet{{mode}});
}

ModeCounts modeCounts(const std::vector<Index>& indices, const std::vector<int>& dims) {
    if (indices.empty()) throw EmptyInput("mode counts of an empty index set");
    ModeCounts m(dims.size(), 0);
    for (size_t i = 0; i < dims.size(); ++i) {
        std::vector<char> seen(dims[i], 0);
        for (const Index& x : indices) seen[x[i]] = 1;
        m[i] = static_cast<int>(std::count(seen.begin(), seen.end(), 1));
    }
    return m;
}

ModeCounts modeCounts(const SamplingPattern& pattern) {
    return modeCounts(pattern.observed, pattern.dims);
}

namespace {

bool parseHeader(const std::string& line, std::vector<int>& dims) {
    std::istringstream ss(line);
    std::string tag;
    ss >> tag;
    if (tag != "dims:") return false;
    int n;
    while (ss >> n) dims.push_back(n);
    return !dims.empty();
}

}  // namespace

SamplingPattern readPattern(std::istream& in, bool oneBased) {
    std::string line;
    int lineNo = 0;
    std::vector<int> dims;
    bool haveHeader = false;
    std::vector<Index> tuples;
    std::string denseDigits;
    bool tupleMode = true;

    while (std::getline(in, line)) {
        ++lineNo;
        // strip comments and surrounding whitespace
        if (auto pos = line.find('#'); pos != std::string::npos) line.erase(pos);
        std::istringstream probe(line);
        std::string first;
        if (!(probe >> first)) continue;

        if (!haveHeader) {
            if (!parseHeader(line, dims)) throw ParseError("expected 'dims: n_1 ... n_d' header", lineNo);
            haveHeader = true;
            continue;
        }

        std::istringstream ss(line);
        std::vector<std::string> tokens;
        std::string tok;
        while (ss >> tok) tokens.push_back(tok);

        // Dense bodies are 0/1 digit runs; tuple rows are d whitespace-
        // separated coordinates. Decide once, on the first body line: a line
        // of pure 0/1 digits is dense unless it has exactly d single-digit
        // tokens (which reads as a tuple).
        if (tuples.empty() && denseDigits.empty()) {
            bool binaryOnly = true;
            bool hasRun = false;
            for (const auto& t : tokens) {
                if (t.size() > 1) hasRun = true;
                for (char c : t) {
                    if (c != '0' && c != '1') binaryOnly = false;
                }
            }
            if (binaryOnly && (hasRun || tokens.size() != dims.size())) tupleMode = false;
        }

        if (tupleMode) {
            if (tokens.size() != dims.size()) {
                throw ParseError("expected " + std::to_string(dims.size()) + " coordinates, got " +
                                     std::to_string(tokens.size()),
                                 lineNo);
            }
            Index x(dims.size());
            for (size_t i = 0; i < tokens.size(); ++i) {
                try {
                    x[i] = std::stoi(tokens[i]);
                } catch (const std::exception&) {
                    throw ParseError("invalid coordinate '" + tokens[i] + "'", lineNo);
                }
                if (oneBased) x[i] -= 1;
            }
            tuples.push_back(std::move(x));
        } else {
            for (const auto& t : tokens) {
                for (char c : t) {
                    if (c != '0' && c != '1') throw ParseError("invalid dense digit", lineNo);
                    denseDigits.push_back(c);
                }
            }
        }
    }
    if (!haveHeader) throw ParseError("missing 'dims:' header", lineNo);

    if (!tupleMode) {
        long long cells = 1;
        for (int n : dims) cells *= n;
        if (static_cast<long long>(denseDigits.size()) != cells) {
            throw ParseError("dense body has " + std::to_string(denseDigits.size()) +
                             " digits, expected " + std::to_string(cells));
        }
        for (long long code = 0; code < cells; ++code) {
            if (denseDigits[code] == '0') continue;
            Index x(dims.size());
            long long rest = code;
            for (size_t i = dims.size(); i-- > 0;) {
                x[i] = static_cast<int>(rest % dims[i]);
                rest /= dims[i];
            }
            tuples.push_back(std::move(x));
        }
    }
    return SamplingPattern(dims, std::move(tuples));
}

SamplingPattern readPattern(const std::string& path, bool oneBased) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");
    return readPattern(in, oneBased);
}

void writePattern(const SamplingPattern& pattern, std::ostream& out) {
    out << "dims:";
    for (int n : pattern.dims) out << ' ' << n;
    out << '\n';
    for (const Index& x : pattern.observed) {
        for (size_t i = 0; i < x.size(); ++i) out << (i ? " " : "") << x[i];
        out << '\n';
    }
}

void writePattern(const SamplingPattern& pattern, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot open '" + path + "' for writing");
    writePattern(pattern, out);
}

}  // namespace cptc
