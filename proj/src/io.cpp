#include "bosonic/io.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "bosonic/errors.hpp"

namespace bosonic {

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

Eigen::VectorXd symmetric_grid(double range, int n) {
    require(n >= 2 && range > 0, "symmetric_grid: need n >= 2 and range > 0");
    Eigen::VectorXd g(n);
    for (int k = 0; k < n; ++k) g(k) = -range + 2.0 * range * k / (n - 1);
    if (n % 2 == 1) g(n / 2) = 0.0;
    return g;
}

void write_wigner_csv(std::ostream& os, const Eigen::VectorXd& q, const Eigen::VectorXd& p, const Eigen::MatrixXd& W) {
    os << "q,p,W\n";
    for (Eigen::Index i = 0; i < q.size(); ++i)
        for (Eigen::Index j = 0; j < p.size(); ++j)
            os << format_double(q(i)) << ',' << format_double(p(j)) << ',' << format_double(W(i, j)) << '\n';
}

void write_bounds_csv(std::ostream& os, const std::vector<BoundPoint>& rows) {
    os << kBoundsHeader << '\n';
    for (const auto& r : rows) {
        os << format_double(r.eta) << ',' << format_double(r.lower_ci) << ',' << format_double(r.hw) << ','
           << format_double(r.dp) << ',' << format_double(r.idp) << ',';
        if (!std::isnan(r.odp)) os << format_double(r.odp);
        os << ',' << format_double(r.gkp_rate) << '\n';
    }
}

void write_choi_csv(std::ostream& os, const ChoiMatrix& X) {
    os << "# choi dim_in=" << X.dim_in() << " dim_out=" << X.dim_out()
       << " index=i*dim_out+j (i input, j output) X[(i,j),(i',j')]=<j|A(|i><i'|)|j'>\n";
    os << "row,col,re,im\n";
    const CMatrix& m = X.matrix();
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c)
            os << r << ',' << c << ',' << format_double(m(r, c).real()) << ',' << format_double(m(r, c).imag())
               << '\n';
}

ChoiMatrix read_choi_csv(std::istream& is) {
    std::string line;
    Eigen::Index din = 0, dout = 0;
    if (!std::getline(is, line) || line.rfind("# choi", 0) != 0) throw DomainError("read_choi_csv: missing header");
    {
        std::istringstream hs(line);
        std::string tok;
        while (hs >> tok) {
            if (tok.rfind("dim_in=", 0) == 0) din = std::stol(tok.substr(7));
            if (tok.rfind("dim_out=", 0) == 0) dout = std::stol(tok.substr(8));
        }
    }
    if (din <= 0 || dout <= 0) throw DomainError("read_choi_csv: bad dimensions in header");
    if (!std::getline(is, line) || line != "row,col,re,im") throw DomainError("read_choi_csv: missing column header");
    const Eigen::Index m = din * dout;
    CMatrix X = CMatrix::Zero(m, m);
    Eigen::Index count = 0;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string f[4];
        for (auto& s : f)
            if (!std::getline(ls, s, ',')) throw DomainError("read_choi_csv: malformed row");
        const long r = std::stol(f[0]), c = std::stol(f[1]);
        if (r < 0 || c < 0 || r >= m || c >= m) throw DomainError("read_choi_csv: index out of range");
        X(r, c) = cplx(std::stod(f[2]), std::stod(f[3]));
        ++count;
    }
    if (count != m * m) throw DomainError("read_choi_csv: incomplete matrix");
    return ChoiMatrix(din, dout, std::move(X));
}

}  // namespace bosonic
