#include "taskdiag/cl_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "taskdiag/errors.hpp"

namespace taskdiag {

ResultsMatrix::ResultsMatrix(std::size_t t_tasks,
                             std::vector<std::optional<double>> entries)
    : t_(t_tasks), m_(std::move(entries)) {
    if (t_ < 2) throw MissingEntry("results matrix needs T >= 2");
    if (m_.size() != t_ * t_) throw MissingEntry("entries size mismatch");
    for (std::size_t i = 0; i < t_; ++i)
        for (std::size_t j = 0; j <= i; ++j) {
            const auto& v = m_[i * t_ + j];
            if (!v)
                throw MissingEntry("lower-triangle cell (" + std::to_string(i + 1) +
                                   "," + std::to_string(j + 1) + ") is absent");
            if (*v < 0)
                throw MissingEntry("negative MSE at (" + std::to_string(i + 1) + "," +
                                   std::to_string(j + 1) + ")");
        }
}

double ResultsMatrix::at(std::size_t i, std::size_t j) const {
    const auto& v = m_[i * t_ + j];
    if (!v)
        throw MissingEntry("cell (" + std::to_string(i + 1) + "," +
                           std::to_string(j + 1) + ") is absent");
    return *v;
}

bool ResultsMatrix::present(std::size_t i, std::size_t j) const {
    return static_cast<bool>(m_[i * t_ + j]);
}

ResultsMatrix ResultsMatrix::load_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw EmptyFile("cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw EmptyFile(path + " has no header");

    auto split = [](const std::string& l) {
        std::vector<std::string> cells;
        std::string cell;
        std::stringstream ss(l);
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (!l.empty() && l.back() == ',') cells.emplace_back();
        return cells;
    };
    const std::size_t t = split(line).size() - 1;
    if (t < 2) throw MissingEntry(path + ": header names fewer than 2 tasks");

    std::vector<std::optional<double>> entries(t * t);
    std::size_t row = 0;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (row >= t) throw MissingEntry(path + ": more rows than tasks");
        const auto cells = split(line);
        if (cells.size() != t + 1)
            throw MalformedRow(path + ": row " + std::to_string(row + 1) +
                               " has wrong cell count");
        for (std::size_t j = 0; j < t; ++j) {
            std::string s = cells[j + 1];
            s.erase(std::remove_if(s.begin(), s.end(), ::isspace), s.end());
            if (!s.empty()) entries[row * t + j] = std::stod(s);
        }
        ++row;
    }
    if (row != t) throw MissingEntry(path + ": expected " + std::to_string(t) + " rows");
    return ResultsMatrix(t, std::move(entries));
}

double forgetting(const ResultsMatrix& rm) {
    const std::size_t t = rm.t_tasks();
    double acc = 0;
    for (std::size_t j = 0; j + 1 < t; ++j) {
        double best = rm.at(j, j);
        for (std::size_t k = j; k + 1 < t; ++k) best = std::min(best, rm.at(k, j));
        acc += rm.at(t - 1, j) - best;
    }
    return acc / static_cast<double>(t - 1);
}

double backward_transfer(const ResultsMatrix& rm) {
    const std::size_t t = rm.t_tasks();
    double acc = 0;
    for (std::size_t j = 0; j + 1 < t; ++j) acc += rm.at(j, j) - rm.at(t - 1, j);
    return acc / static_cast<double>(t - 1);
}

double average_mse(const ResultsMatrix& rm, bool full_triangle) {
    const std::size_t t = rm.t_tasks();
    double acc = 0;
    if (!full_triangle) {
        for (std::size_t j = 0; j < t; ++j) acc += rm.at(t - 1, j);
        return acc / static_cast<double>(t);
    }
    std::size_t n = 0;
    for (std::size_t i = 0; i < t; ++i)
        for (std::size_t j = 0; j <= i; ++j, ++n) acc += rm.at(i, j);
    return acc / static_cast<double>(n);
}

double cross_taskification_std(const std::vector<double>& values) {
    if (values.size() < 2) throw TooFew("need at least 2 values");
    double mean = 0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(values.size());
    double var = 0;
    for (double v : values) {
        const double d = v - mean;
        var += d * d;
    }
    return std::sqrt(var / static_cast<double>(values.size() - 1));
}

}  // namespace taskdiag
