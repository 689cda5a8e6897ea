package com.toy.ui;

import com.toy.service.ReportService;

public class ReportView extends BaseView {
    private final ReportService reports = new ReportService();

    public String show() {
        return reports.monthly();
    }
}
