package com.toy.ui;

public interface View {
    void refresh();
}
