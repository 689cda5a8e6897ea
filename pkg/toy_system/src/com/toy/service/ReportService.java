package com.toy.service;

import com.toy.data.OrderRepository;
import com.toy.data.Database;

public class ReportService implements Service {
    private OrderRepository repository;

    public String monthly() {
        return "report for " + Database.NAME;
    }
}
